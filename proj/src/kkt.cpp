#include "fal/kkt.hpp"

#include <algorithm>
#include <cmath>

namespace fal {

double certificate_step(double L, std::optional<StrongMonotonicity> moduli) {
  if (!(L > 0.0)) throw InvalidParameter("certificate smoothness constant must be positive");
  if (moduli) return std::min(moduli->sigma_x, moduli->sigma_y) / (L * L);
  return 1.0 / L;
}

StationarityCertificate certify_with_step(const SaddleGradient& grad, const GradPair& grad_xy,
                                          const ProxOracle& prox_p, const ProxOracle& prox_q,
                                          double gamma, const Vector& x, const Vector& y) {
  const PrimalDualPoint fbs = fbs_step(grad_xy, prox_p, prox_q, gamma, x, y);
  const GradPair g_fbs = grad(fbs.x, fbs.y);
  check_finite(g_fbs.x, "certificate gradient");
  check_finite(g_fbs.y, "certificate gradient");

  StationarityCertificate cert;
  cert.gamma = gamma;
  cert.residual_x = ((x - fbs.x) / gamma - (grad_xy.x - g_fbs.x)).norm();
  cert.residual_y = ((fbs.y - y) / gamma - (grad_xy.y - g_fbs.y)).norm();
  cert.residual = std::hypot(cert.residual_x, cert.residual_y);
  cert.x = fbs.x;
  cert.y = fbs.y;
  return cert;
}

StationarityCertificate certify_stationarity(const SaddleGradient& grad,
                                             const ProxOracle& prox_p, const ProxOracle& prox_q,
                                             double L, std::optional<StrongMonotonicity> moduli,
                                             const Vector& x, const Vector& y) {
  const double gamma = certificate_step(L, moduli);
  return certify_with_step(grad, grad(x, y), prox_p, prox_q, gamma, x, y);
}

double KktResiduals::max() const {
  return std::max({r_stat_x, r_stat_y, r_feas_c, r_feas_d, r_comp_c, r_comp_d});
}

SaddleGradient lagrangian_gradient(const ConstrainedMinimaxProblem& prob, const Vector& lambda_x,
                                   const Vector& lambda_y) {
  return [prob, lambda_x, lambda_y](const Vector& x, const Vector& y) {
    GradPair g = prob.grad_f(x, y);
    if (prob.n_c > 0) g.x += prob.jac_c_t_apply(x, lambda_x);
    if (prob.n_d > 0) {
      const GradPair gd = prob.jac_d_t_apply(x, y, lambda_y);
      g.x -= gd.x;
      g.y -= gd.y;
    }
    return g;
  };
}

double lagrangian_smoothness(const ProblemConstants& consts, const Vector& lambda_x,
                             const Vector& lambda_y) {
  double L = require(consts.L_grad_f, "L_grad_f");
  if (lambda_x.size() > 0) L += lambda_x.norm() * require(consts.L_grad_c, "L_grad_c");
  if (lambda_y.size() > 0) L += lambda_y.norm() * require(consts.L_grad_d, "L_grad_d");
  return L;
}

KktResiduals kkt_residuals(const ConstrainedMinimaxProblem& prob, const Vector& x,
                           const Vector& y, const Vector& lambda_x, const Vector& lambda_y) {
  if ((lambda_x.array() < 0.0).any() || (lambda_y.array() < 0.0).any())
    throw InvalidInput("KKT multipliers must be nonnegative");

  KktResiduals r;
  if (prob.n_c > 0) {
    const Vector c = prob.eval_c(x);
    check_finite(c, "c(x)");
    r.r_feas_c = positive_part(c).norm();
    r.r_comp_c = std::abs(lambda_x.dot(c));
  }
  if (prob.n_d > 0) {
    const Vector d = prob.eval_d(x, y);
    check_finite(d, "d(x,y)");
    r.r_feas_d = positive_part(d).norm();
    r.r_comp_d = std::abs(lambda_y.dot(d));
  }

  const double L = lagrangian_smoothness(prob.constants, lambda_x, lambda_y);
  const double gamma = L > 0.0 ? 1.0 / L : 1.0;
  const SaddleGradient grad = lagrangian_gradient(prob, lambda_x, lambda_y);
  const StationarityCertificate cert =
      certify_with_step(grad, grad(x, y), prob.prox_p, prob.prox_q, gamma, x, y);
  r.r_stat_x = cert.residual_x;
  r.r_stat_y = cert.residual_y;
  return r;
}

}  // namespace fal
