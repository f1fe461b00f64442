#include "fal/scc_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "fal/prox.hpp"

namespace fal {

namespace {

constexpr double kUnitGapScale = 1e6;

std::int64_t ceil_plus(double v) {
  if (!(v > 0.0)) return 0;
  return static_cast<std::int64_t>(std::ceil(v));
}

}  // namespace

void SccProblem::validate() const {
  if (!grad) throw InvalidParameter("scc problem needs a gradient oracle");
  if (!prox_p || !prox_q) throw InvalidParameter("scc problem needs both prox oracles");
  if (!(sigma_x > 0.0) || !(sigma_y > 0.0))
    throw InvalidParameter("strong convexity moduli must be positive");
  if (!(L >= std::max(sigma_x, sigma_y)))
    throw InvalidParameter("smoothness constant must be at least max(sigma_x, sigma_y)");
}

SccParams make_params(double sigma_x, double sigma_y, double L) {
  if (!(sigma_x > 0.0) || !(sigma_y > 0.0))
    throw InvalidParameter("strong convexity moduli must be positive");
  if (!(L > 0.0)) throw InvalidParameter("smoothness constant must be positive");
  SccParams p;
  p.alpha = std::min(1.0, std::sqrt(8.0 * sigma_y / sigma_x));
  p.eta_z = sigma_x / 2.0;
  p.eta_y = std::min(1.0 / (2.0 * sigma_y), 4.0 / (p.alpha * sigma_x));
  p.zeta = 1.0 / (2.0 * std::sqrt(5.0) * (1.0 + 8.0 * L / sigma_x));
  p.gamma_x = 8.0 / sigma_x;
  p.gamma_y = 8.0 / sigma_x;
  p.zeta_bar = std::min(sigma_x, sigma_y) / (L * L);
  return p;
}

std::int64_t default_max_inner(const SccParams&, double sigma_x, double L) {
  return 10 * static_cast<std::int64_t>(std::ceil(96.0 * std::sqrt(2.0) * (1.0 + 8.0 * L / sigma_x)));
}

std::int64_t default_max_outer(const SccParams& params, double sigma_x, double sigma_y, double L,
                               double eps_bar) {
  const double rate = std::max(2.0 / params.alpha, params.alpha * sigma_x / (4.0 * sigma_y));
  const double scale = std::max(params.eta_z / (sigma_x * sigma_x), params.eta_y);
  const double denom = std::pow(1.0 / params.zeta_bar + L, -2.0) * eps_bar * eps_bar;
  const double arg = 4.0 * scale * kUnitGapScale / denom;
  const std::int64_t k = arg > 0.0 ? ceil_plus(rate * std::log(arg)) : 0;
  return std::max<std::int64_t>(10 * k, 100);
}

SccState initial_state(const Vector& z0, const Vector& y0) {
  SccState s;
  s.k = 0;
  s.z = z0;
  s.y = y0;
  s.z_f = z0;
  s.y_f = y0;
  return s;
}

GradPair hat_gradient(const GradPair& grad_bar, double sigma_x, double sigma_y, const Vector& x,
                      const Vector& y) {
  return {grad_bar.x - sigma_x * x, grad_bar.y + sigma_y * y};
}

GradPair a_field(const GradPair& grad_hat, double sigma_x, double sigma_y, const Vector& z_g,
                 const Vector& y_g, const Vector& x, const Vector& y) {
  check_finite(grad_hat.x, "saddle gradient");
  check_finite(grad_hat.y, "saddle gradient");
  GradPair a;
  a.x = grad_hat.x + sigma_x * (x - z_g / sigma_x) / 2.0;
  a.y = -grad_hat.y + sigma_y * y + sigma_x * (y - y_g) / 8.0;
  return a;
}

bool inner_loop_done(const SccParams& params, const Vector& ab_x, const Vector& ab_y,
                     const Vector& dx, const Vector& dy) {
  const double lhs = params.gamma_x * ab_x.squaredNorm() + params.gamma_y * ab_y.squaredNorm();
  const double rhs = dx.squaredNorm() / params.gamma_x + dy.squaredNorm() / params.gamma_y;
  return !(lhs > rhs);
}

namespace {

// In-place forms of hat_gradient / a_field / inner_loop_done for the hot
// loop; the arithmetic is identical so results match bit for bit.
void hat_gradient_inplace(GradPair& g, double sigma_x, double sigma_y, const Vector& x,
                          const Vector& y) {
  g.x -= sigma_x * x;
  g.y += sigma_y * y;
}

void a_field_into(GradPair& a, const GradPair& grad_hat, double sigma_x, double sigma_y,
                  const Vector& z_g, const Vector& y_g, const Vector& x, const Vector& y) {
  check_finite(grad_hat.x, "saddle gradient");
  check_finite(grad_hat.y, "saddle gradient");
  a.x = grad_hat.x + sigma_x * (x - z_g / sigma_x) / 2.0;
  a.y = -grad_hat.y + sigma_y * y + sigma_x * (y - y_g) / 8.0;
}

bool inner_done(const SccParams& params, const GradPair& a, const Vector& b_x, const Vector& b_y,
                const Vector& x, const Vector& y, const Vector& x_m, const Vector& y_m) {
  const double lhs = params.gamma_x * (a.x + b_x).squaredNorm() +
                     params.gamma_y * (a.y + b_y).squaredNorm();
  const double rhs =
      (x - x_m).squaredNorm() / params.gamma_x + (y - y_m).squaredNorm() / params.gamma_y;
  return !(lhs > rhs);
}

// Evaluation context for one outer iteration. Every call to `grad_hat` costs
// one gradient; every call to `prox` one prox_p and one prox_q.
struct InnerContext {
  const SccProblem& prob;
  const Vector& z_g;
  const Vector& y_g;
  SccCounts* counts;
  Vector u_x, u_y;  // prox arguments, reused

  void grad_hat(const Vector& x, const Vector& y, GradPair& out) const {
    if (counts) ++counts->grad;
    if (prob.grad_into) prob.grad_into(x, y, out);
    else out = prob.grad(x, y);
    hat_gradient_inplace(out, prob.sigma_x, prob.sigma_y, x, y);
  }

  void a(const GradPair& gh, const Vector& x, const Vector& y, GradPair& out) const {
    a_field_into(out, gh, prob.sigma_x, prob.sigma_y, z_g, y_g, x, y);
  }

  // Prox pair at u = base − s·a with step s. Returns the new point and
  // b = (u − prox(u))/s, evaluated as (base − prox(u))/s − a so that b = −a
  // holds exactly when the prox returns `base`.
  void prox(double s_x, double s_y, const Vector& base_x, const Vector& base_y,
            const GradPair& a, Vector& x, Vector& y, Vector& b_x, Vector& b_y) {
    if (counts) {
      ++counts->prox_p;
      ++counts->prox_q;
    }
    u_x = base_x - s_x * a.x;
    u_y = base_y - s_y * a.y;
    x = prob.prox_p(s_x, u_x);
    y = prob.prox_q(s_y, u_y);
    b_x = (base_x - x) / s_x - a.x;
    b_y = (base_y - y) / s_y - a.y;
  }
};

}  // namespace

SccState outer_step(const SccState& state, const SccProblem& prob, const SccParams& params,
                    std::int64_t max_inner, SccCounts* counts, OuterStepDetail* detail) {
  const double a_bar = params.alpha;
  const Vector z_g = a_bar * state.z + (1.0 - a_bar) * state.z_f;
  const Vector y_g = a_bar * state.y + (1.0 - a_bar) * state.y_f;
  const Vector x_m = -z_g / prob.sigma_x;
  const Vector& y_m = y_g;

  InnerContext ctx{prob, z_g, y_g, counts, {}, {}};
  const double s_x = params.zeta * params.gamma_x;
  const double s_y = params.zeta * params.gamma_y;

  Vector x0, y0, b_x, b_y;
  GradPair gh, at, ah;
  {
    ctx.grad_hat(x_m, y_m, gh);
    ctx.a(gh, x_m, y_m, at);
    ctx.prox(s_x, s_y, x_m, y_m, at, x0, y0, b_x, b_y);
  }
  if (detail) {
    detail->z_g = z_g;
    detail->y_g = y_g;
    detail->x_anchor = x_m;
    detail->y_anchor = y_m;
    detail->x0 = x0;
    detail->y0 = y0;
    detail->b_x0 = b_x;
    detail->b_y0 = b_y;
  }

  Vector xt = x0;
  Vector yt = y0;
  Vector base_x, base_y, xh, yh;
  ctx.grad_hat(xt, yt, gh);
  ctx.a(gh, xt, yt, at);
  std::int64_t t = 0;
  while (!inner_done(params, at, b_x, b_y, xt, yt, x_m, y_m)) {
    if (t >= max_inner) {
      throw IterationLimitExceeded(
          fmt::format("inner loop exceeded {} iterations at outer iteration {}", max_inner,
                      state.k),
          xt, yt, std::numeric_limits<double>::quiet_NaN());
    }
    const double beta = SccParams::beta(t);
    base_x = xt + beta * (x0 - xt);
    base_y = yt + beta * (y0 - yt);
    xh = base_x - s_x * (at.x + b_x);
    yh = base_y - s_y * (at.y + b_y);
    GradPair& g_h = ah;  // reuse as scratch for the half-step gradient
    ctx.grad_hat(xh, yh, g_h);
    ctx.a(g_h, xh, yh, at);
    ctx.prox(s_x, s_y, base_x, base_y, at, xt, yt, b_x, b_y);
    ++t;
    ctx.grad_hat(xt, yt, gh);
    ctx.a(gh, xt, yt, at);
  }
  if (detail) detail->inner_iterations = t;

  SccState next;
  next.k = state.k + 1;
  next.y_f = yt;
  next.z_f = gh.x + b_x;
  const Vector w_f = -gh.y + b_y;
  next.z = state.z + (params.eta_z / prob.sigma_x) * (next.z_f - state.z) -
           params.eta_z * (xt + next.z_f / prob.sigma_x);
  next.y = state.y + params.eta_y * prob.sigma_y * (next.y_f - state.y) -
           params.eta_y * (w_f + prob.sigma_y * next.y_f);
  return next;
}

SccStart default_start(const SccProblem& prob, Index n, Index m) {
  SccStart s;
  s.z0 = -prob.sigma_x * prob.prox_p(1.0, Vector::Zero(n));
  s.y0 = prob.prox_q(1.0, Vector::Zero(m));
  return s;
}

SccResult solve_scc(const SccProblem& prob, double eps_bar, const SccStart& start,
                    const SccOptions& options) {
  prob.validate();
  if (!(eps_bar > 0.0)) throw InvalidParameter("scc tolerance must be positive");
  if (start.z0.size() == 0 && start.y0.size() == 0)
    throw InvalidInput("scc start point is empty");
  check_finite(start.z0, "scc start z");
  check_finite(start.y0, "scc start y");

  const SccParams params = make_params(prob.sigma_x, prob.sigma_y, prob.L);
  const std::int64_t max_inner = options.limits.max_inner > 0
                                     ? options.limits.max_inner
                                     : default_max_inner(params, prob.sigma_x, prob.L);
  const std::int64_t max_outer =
      options.limits.max_outer > 0
          ? options.limits.max_outer
          : default_max_outer(params, prob.sigma_x, prob.sigma_y, prob.L, eps_bar);

  SccResult result;
  SccState state = initial_state(start.z0, start.y0);

  // Counting wrapper for the certificate evaluations.
  const SaddleGradient counted_grad = [&](const Vector& x, const Vector& y) {
    ++result.counts.grad;
    return prob.grad(x, y);
  };
  const ProxOracle counted_p = [&](double g, const Vector& v) {
    ++result.counts.prox_p;
    return prob.prox_p(g, v);
  };
  const ProxOracle counted_q = [&](double g, const Vector& v) {
    ++result.counts.prox_q;
    return prob.prox_q(g, v);
  };

  double best_residual = std::numeric_limits<double>::infinity();
  Vector best_x, best_y;

  for (std::int64_t k = 0; k < max_outer; ++k) {
    OuterStepDetail detail;
    try {
      state = outer_step(state, prob, params, max_inner, &result.counts, &detail);
    } catch (const IterationLimitExceeded& e) {
      if (best_x.size() == 0 && best_y.size() == 0) throw;
      throw IterationLimitExceeded(e.what(), best_x, best_y, best_residual);
    }
    result.inner_iterations += detail.inner_iterations;

    const Vector x = -state.z / prob.sigma_x;
    const Vector& y = state.y;
    const StationarityCertificate cert = certify_with_step(
        counted_grad, counted_grad(x, y), counted_p, counted_q, params.zeta_bar, x, y);
    check_finite(cert.residual, "scc certificate");

    if (cert.residual < best_residual) {
      best_residual = cert.residual;
      best_x = cert.x;
      best_y = cert.y;
    }
    if (options.keep_records)
      result.records.push_back({detail.inner_iterations, cert.residual, result.counts});
    if (options.trace && options.trace->records(Phase::scc)) {
      TraceRow row;
      row.phase = Phase::scc;
      row.outer_iter = k;
      row.inner_iter = detail.inner_iterations;
      row.residual_cert = cert.residual;
      options.trace->add(row);
    }

    if (cert.residual <= eps_bar) {
      result.x = cert.x;
      result.y = cert.y;
      result.residual = cert.residual;
      result.residual_x = cert.residual_x;
      result.residual_y = cert.residual_y;
      result.outer_iterations = k + 1;
      return result;
    }
  }
  throw IterationLimitExceeded(
      fmt::format("scc solver exceeded {} outer iterations (best residual {})", max_outer,
                  best_residual),
      best_x, best_y, best_residual);
}

}  // namespace fal
