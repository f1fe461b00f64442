#include "fal/prox.hpp"

#include <cmath>

namespace fal {

Vector positive_part(const Vector& v) { return v.cwiseMax(0.0); }

Vector project_nonneg_ball(const Vector& v, double radius) {
  if (!(radius > 0.0)) throw InvalidParameter("projection radius must be positive");
  Vector w = positive_part(v);
  const double norm = w.norm();
  // 0 is already in the set; no scaling needed.
  if (norm > radius) w *= radius / norm;
  return w;
}

ProxOracle prox_zero() {
  return [](double, const Vector& v) { return v; };
}

ProxOracle prox_box(Vector lo, Vector hi) {
  if (lo.size() != hi.size()) throw InvalidParameter("box bounds have mismatched sizes");
  if ((lo.array() > hi.array()).any()) throw InvalidParameter("box requires lo <= hi");
  return [lo = std::move(lo), hi = std::move(hi)](double, const Vector& v) -> Vector {
    return v.cwiseMax(lo).cwiseMin(hi);
  };
}

ProxOracle prox_box(Index dim, double lo, double hi) {
  return prox_box(Vector::Constant(dim, lo), Vector::Constant(dim, hi));
}

ProxOracle prox_l1(Vector weights) {
  if ((weights.array() < 0.0).any()) throw InvalidParameter("l1 weights must be nonnegative");
  return [w = std::move(weights)](double gamma, const Vector& v) -> Vector {
    const Eigen::ArrayXd shrink = (v.array().abs() - gamma * w.array()).max(0.0);
    return (v.array().sign() * shrink).matrix();
  };
}

PrimalDualPoint fbs_step(const GradPair& grad, const ProxOracle& prox_p,
                         const ProxOracle& prox_q, double gamma, const Vector& x,
                         const Vector& y) {
  if (!(gamma > 0.0)) throw InvalidParameter("FBS step size must be positive");
  check_finite(grad.x, "FBS gradient");
  check_finite(grad.y, "FBS gradient");
  return {prox_p(gamma, x - gamma * grad.x), prox_q(gamma, y + gamma * grad.y)};
}

PrimalDualPoint fbs_step(const SaddleGradient& grad, const ProxOracle& prox_p,
                         const ProxOracle& prox_q, double gamma, const Vector& x,
                         const Vector& y) {
  return fbs_step(grad(x, y), prox_p, prox_q, gamma, x, y);
}

}  // namespace fal
