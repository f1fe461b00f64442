#include "fal/alm_solver.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "fal/prox.hpp"

namespace fal {

double AlmConfig::eps_k(std::int64_t k) const {
  return eps0 * std::pow(tau, static_cast<double>(k));
}

void AlmConfig::validate(const ConstrainedMinimaxProblem& prob) const {
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidParameter("epsilon must lie in (0, 1)");
  if (!(tau > 0.0 && tau < 1.0)) throw InvalidParameter("tau must lie in (0, 1)");
  if (!(eps0 > tau * eps && eps0 <= 1.0))
    throw InvalidParameter("epsilon_0 must lie in (tau * epsilon, 1]");
  if (!(Lambda > 0.0)) throw InvalidParameter("Lambda must be positive");
  if (lambda_x0.size() != prob.n_c) throw InvalidParameter("lambda_x0 has the wrong dimension");
  if (lambda_y0.size() != prob.n_d) throw InvalidParameter("lambda_y0 has the wrong dimension");
  if ((lambda_x0.array() < 0.0).any() || lambda_x0.norm() > Lambda)
    throw InvalidParameter("lambda_x0 must lie in the nonnegative Lambda-ball");
  if ((lambda_y0.array() < 0.0).any()) throw InvalidParameter("lambda_y0 must be nonnegative");
  if (x0.size() != prob.n || x_nf.size() != prob.n)
    throw InvalidParameter("x0 and x_nf must have dimension n");
  if (y0.size() != prob.m) throw InvalidParameter("y0 must have dimension m");
}

Vector choose_init(const ConstrainedMinimaxProblem& prob, const Vector& x_k, const Vector& x_nf,
                   const Vector& y_k, const Vector& lambda_x, double rho) {
  const double at_k = eval_al_x(prob, x_k, y_k, lambda_x, rho);
  const double at_nf = eval_al_x(prob, x_nf, y_k, lambda_x, rho);
  return at_k <= at_nf ? x_k : x_nf;
}

double lipschitz_Lk(const ProblemConstants& k, double rho, double norm_lambda_x,
                    double norm_lambda_y) {
  const double L_gf = require(k.L_grad_f, "L_grad_f");
  const double L_c = require(k.L_c, "L_c");
  const double L_gc = require(k.L_grad_c, "L_grad_c");
  const double c_hi = require(k.c_hi, "c_hi");
  const double L_d = require(k.L_d, "L_d");
  const double L_gd = require(k.L_grad_d, "L_grad_d");
  const double d_hi = require(k.d_hi, "d_hi");
  return L_gf + rho * L_c * L_c + rho * c_hi * L_gc + norm_lambda_x * L_gc + rho * L_d * L_d +
         rho * d_hi * L_gd + norm_lambda_y * L_gd;
}

double lipschitz_Lk(const ConstrainedMinimaxProblem& prob, double rho, double norm_lambda_x,
                    double norm_lambda_y) {
  ProblemConstants k = prob.constants;
  if (prob.n_c == 0) k.L_c = k.L_grad_c = k.c_hi = 0.0;
  if (prob.n_d == 0) k.L_d = k.L_grad_d = k.d_hi = 0.0;
  return lipschitz_Lk(k, rho, norm_lambda_x, norm_lambda_y);
}

NccProblem al_subproblem(const ConstrainedMinimaxProblem& prob, const Vector& lambda_x,
                         const Vector& lambda_y, double rho, double L_k) {
  if (!(rho > 0.0)) throw InvalidParameter("rho must be positive");
  NccProblem sub;
  // Scratch is per thread so batch runs can share nothing.
  sub.grad_into = [prob, lambda_x, lambda_y, rho](const Vector& x, const Vector& y, GradPair& g) {
    thread_local Vector w, jc;
    thread_local GradPair gd;
    grad_f_to(prob, x, y, g);
    if (prob.n_c > 0) {
      c_value_to(prob, x, w);
      w = (lambda_x + rho * w).cwiseMax(0.0);
      jac_c_t_apply_to(prob, x, w, jc);
      g.x += jc;
    }
    if (prob.n_d > 0) {
      d_value_to(prob, x, y, w);
      w = (lambda_y + rho * w).cwiseMax(0.0);
      jac_d_t_apply_to(prob, x, y, w, gd);
      g.x -= gd.x;
      g.y -= gd.y;
    }
  };
  sub.grad = [into = sub.grad_into](const Vector& x, const Vector& y) {
    GradPair g;
    into(x, y, g);
    return g;
  };
  sub.prox_p = prob.prox_p;
  sub.prox_q = prob.prox_q;
  sub.L = L_k;
  sub.D_y = require(prob.constants.D_y, "D_y");
  return sub;
}

MultiplierPair update_multipliers(const Vector& lambda_x, const Vector& lambda_y,
                                  const Vector& c_val, const Vector& d_val, double rho,
                                  double Lambda) {
  MultiplierPair out;
  out.lambda_x = lambda_x.size() > 0 ? project_nonneg_ball(lambda_x + rho * c_val, Lambda)
                                     : Vector(0);
  out.lambda_y = positive_part(lambda_y + rho * d_val);
  return out;
}

std::int64_t alm_iteration_count(double eps, double eps0, double tau) {
  if (!(eps > 0.0) || !(eps0 > 0.0) || !(tau > 0.0 && tau < 1.0))
    throw InvalidParameter("iteration count needs eps, eps0 > 0 and tau in (0, 1)");
  const double v = (std::log(eps) - std::log(eps0)) / std::log(tau);
  if (!(v > 0.0)) return 0;
  return static_cast<std::int64_t>(std::ceil(v));
}

AlmOutput solve_alm(const ConstrainedMinimaxProblem& raw, const AlmConfig& cfg,
                    SolveTrace* trace) {
  cfg.validate(raw);
  {
    const double nf = positive_part(raw.eval_c(cfg.x_nf)).norm();
    if (!(nf <= std::sqrt(cfg.eps)))
      throw InvalidInput(fmt::format(
          "x_nf is not sqrt(eps)-feasible: ||[c(x_nf)]_+|| = {} > {}", nf, std::sqrt(cfg.eps)));
    if ((raw.prox_p(1.0, cfg.x_nf) - cfg.x_nf).norm() > 1e-12)
      throw InvalidInput("x_nf lies outside dom p");
  }

  AlmOutput out;
  OracleCounters counters;
  const ConstrainedMinimaxProblem prob = instrument(raw, counters);
  if (trace) trace->attach(&counters);

  Vector x = cfg.x0;
  Vector y = cfg.y0;
  Vector lx = cfg.lambda_x0;
  Vector ly = cfg.lambda_y0;
  Vector lx_prev = lx;

  for (std::int64_t k = 0;; ++k) {
    const double eps_k = cfg.eps_k(k);
    const double rho = 1.0 / eps_k;

    const Vector x_init = choose_init(raw, x, cfg.x_nf, y, lx, rho);
    const bool used_nf = x_init != x;
    const double L_k = lipschitz_Lk(raw, rho, lx.norm(), ly.norm());
    const NccProblem sub = al_subproblem(prob, lx, ly, rho, L_k);

    NccConfig ncfg;
    ncfg.eps = eps_k;
    ncfg.eps_hat0 = eps_k / (2.0 * std::sqrt(rho));
    ncfg.scc_limits = cfg.scc_limits;
    ncfg.max_outer = cfg.ncc_max_outer;
    ncfg.keep_records = false;

    NccResult inner;
    try {
      inner = solve_ncc(sub, ncfg, {x_init, y}, trace);
    } catch (const IterationLimitExceeded& e) {
      if (trace) trace->attach(nullptr);
      throw IterationLimitExceeded(fmt::format("alm iteration {}: {}", k, e.what()), e.x(), e.y(),
                                   e.residual());
    }
    x = std::move(inner.x);
    y = std::move(inner.y);

    const Vector c = raw.eval_c(x);
    const Vector d = raw.eval_d(x, y);
    lx_prev = lx;
    MultiplierPair next = update_multipliers(lx, ly, c, d, rho, cfg.Lambda);
    lx = std::move(next.lambda_x);
    ly = std::move(next.lambda_y);

    AlmRecord rec;
    rec.k = k;
    rec.eps_k = eps_k;
    rec.rho_k = rho;
    rec.L_k = L_k;
    rec.used_x_nf = used_nf;
    rec.ncc_outer = inner.outer_iterations;
    rec.ncc_displacement = inner.displacement;
    rec.multipliers = {lx, ly};
    rec.feas_c = positive_part(c).norm();
    rec.feas_d = positive_part(d).norm();
    rec.comp_c = std::abs(lx.dot(c));
    rec.comp_d = std::abs(ly.dot(d));
    rec.counters = counters;
    out.records.push_back(rec);

    if (trace && trace->records(Phase::alm)) {
      TraceRow row;
      row.phase = Phase::alm;
      row.outer_iter = k;
      row.inner_iter = inner.outer_iterations;
      row.eps_k = eps_k;
      row.rho_k = rho;
      row.residual_cert = inner.displacement;
      row.feas_c = rec.feas_c;
      row.feas_d = rec.feas_d;
      row.comp_c = rec.comp_c;
      row.comp_d = rec.comp_d;
      trace->add(row);
    }

    if (eps_k <= cfg.eps) {
      out.outer_iterations = k + 1;
      out.lambda_x_tilde =
          lx_prev.size() > 0 ? positive_part(lx_prev + c / eps_k) : Vector(0);
      break;
    }
  }
  if (trace) trace->attach(nullptr);

  out.x = x;
  out.y = y;
  out.lambda_x = lx;
  out.lambda_y = ly;
  out.counters = counters;
  out.kkt = kkt_residuals(raw, out.x, out.y, out.lambda_x_tilde, out.lambda_y);
  return out;
}

}  // namespace fal
