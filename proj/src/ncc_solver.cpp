#include "fal/ncc_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace fal {

void NccProblem::validate() const {
  if (!grad) throw InvalidParameter("ncc problem needs a gradient oracle");
  if (!prox_p || !prox_q) throw InvalidParameter("ncc problem needs both prox oracles");
  if (!(L > 0.0)) throw InvalidParameter("ncc smoothness constant must be positive");
  if (!(D_y > 0.0)) throw InvalidParameter("ncc y-diameter must be positive");
}

void NccConfig::validate() const {
  if (!(eps > 0.0)) throw InvalidParameter("ncc tolerance must be positive");
  if (!(eps_hat0 > 0.0) || !(eps_hat0 <= eps / 2.0))
    throw InvalidParameter("eps_hat0 must lie in (0, eps/2]");
}

SccProblem build_subproblem(const NccProblem& prob, const Vector& x_k, const Vector& anchor_y,
                            double eps) {
  const double L = prob.L;
  const double w = eps / (2.0 * prob.D_y);
  SccProblem sub;
  SaddleGradientInto base = prob.grad_into;
  if (!base) base = [grad = prob.grad](const Vector& x, const Vector& y, GradPair& g) { g = grad(x, y); };
  sub.grad_into = [base, x_k, anchor_y, L, w](const Vector& x, const Vector& y, GradPair& g) {
    base(x, y, g);
    g.x += 2.0 * L * (x - x_k);
    g.y -= w * (y - anchor_y);
  };
  sub.grad = [into = sub.grad_into](const Vector& x, const Vector& y) {
    GradPair g;
    into(x, y, g);
    return g;
  };
  sub.prox_p = prob.prox_p;
  sub.prox_q = prob.prox_q;
  sub.sigma_x = L;
  sub.sigma_y = w;
  sub.L = 3.0 * L + w;
  return sub;
}

std::int64_t default_ncc_max_outer(const NccProblem& prob, const NccConfig& cfg) {
  const double e = cfg.eps;
  const double L = prob.L;
  const double Dy = prob.D_y;
  const double t = 16.0 * (1.0 + e * Dy / 4.0) * L / (e * e) +
                   32.0 * cfg.eps_hat0 * cfg.eps_hat0 * (1.0 + 4.0 * Dy * Dy * L * L / (e * e)) /
                       (e * e);
  const double cap = 10.0 * std::ceil(t);
  if (!(cap < 1e15)) return static_cast<std::int64_t>(1e15);
  return std::max<std::int64_t>(static_cast<std::int64_t>(cap), 100);
}

NccResult solve_ncc(const NccProblem& prob, const NccConfig& cfg, const NccStart& start,
                    SolveTrace* trace) {
  prob.validate();
  cfg.validate();
  check_finite(start.x, "ncc start x");
  check_finite(start.y, "ncc start y");
  const Vector anchor = cfg.anchor_y ? *cfg.anchor_y : start.y;
  if (anchor.size() != start.y.size()) throw InvalidInput("ncc anchor has the wrong dimension");

  const std::int64_t max_outer =
      cfg.max_outer > 0 ? cfg.max_outer : default_ncc_max_outer(prob, cfg);
  const double stop = cfg.eps / (4.0 * prob.L);
  const double w = cfg.eps / (2.0 * prob.D_y);

  NccResult result;
  Vector x = start.x;
  Vector y = start.y;
  SccOptions scc_opts;
  scc_opts.limits = cfg.scc_limits;
  scc_opts.trace = trace;

  for (std::int64_t k = 0; k < max_outer; ++k) {
    const double eps_hat = cfg.eps_hat(k);
    const SccProblem sub = build_subproblem(prob, x, anchor, cfg.eps);
    SccStart s;
    s.z0 = -sub.sigma_x * x;
    s.y0 = y;

    SccResult inner;
    try {
      inner = solve_scc(sub, eps_hat, s, scc_opts);
    } catch (const IterationLimitExceeded& e) {
      throw IterationLimitExceeded(fmt::format("ncc iteration {}: {}", k, e.what()), e.x(), e.y(),
                                   e.residual());
    }
    result.counts.grad += inner.counts.grad;
    result.counts.prox_p += inner.counts.prox_p;
    result.counts.prox_q += inner.counts.prox_q;

    const double disp = (inner.x - x).norm();
    if (cfg.keep_records) {
      NccRecord r;
      r.k = k;
      r.eps_hat = eps_hat;
      r.displacement = disp;
      r.scc_residual = inner.residual;
      r.scc_outer = inner.outer_iterations;
      r.scc_inner = inner.inner_iterations;
      r.x_residual_bound = eps_hat + 2.0 * prob.L * disp;
      r.y_residual_bound = eps_hat + w * (inner.y - anchor).norm();
      r.counts = result.counts;
      r.x = inner.x;
      r.y = inner.y;
      result.records.push_back(r);
    }
    if (trace && trace->records(Phase::ncc)) {
      TraceRow row;
      row.phase = Phase::ncc;
      row.outer_iter = k;
      row.inner_iter = inner.outer_iterations;
      row.eps_k = eps_hat;
      row.residual_cert = inner.residual;
      trace->add(row);
    }

    result.x_prev = std::move(x);
    x = std::move(inner.x);
    y = std::move(inner.y);
    if (disp <= stop) {
      result.x = std::move(x);
      result.y = std::move(y);
      result.outer_iterations = k + 1;
      result.displacement = disp;
      return result;
    }
  }
  throw IterationLimitExceeded(
      fmt::format("ncc solver exceeded {} outer iterations", max_outer), x, y,
      std::numeric_limits<double>::quiet_NaN());
}

}  // namespace fal
