#pragma once

#include "fal/core.hpp"

namespace fal {

/// Componentwise max(v_i, 0).
Vector positive_part(const Vector& v);

/// Euclidean projection onto {u >= 0 : ‖u‖ <= radius}. The orthant is a cone
/// and the ball is centered at the origin, so clipping followed by radial
/// scaling is the exact projection.
Vector project_nonneg_ball(const Vector& v, double radius);

/// prox of the zero function (identity).
ProxOracle prox_zero();

/// prox of the indicator of the box [lo, hi]: a componentwise clamp that
/// ignores the step size.
ProxOracle prox_box(Vector lo, Vector hi);

/// Scalar-bounds convenience for a box of dimension `dim`.
ProxOracle prox_box(Index dim, double lo, double hi);

/// prox of sum_i w_i |v_i|: soft thresholding at gamma * w_i.
ProxOracle prox_l1(Vector weights);

struct PrimalDualPoint {
  Vector x;
  Vector y;
};

/// Forward-backward step on the saddle operator: descent in x, ascent in y,
///   x' = prox_p(γ, x − γ g_x),  y' = prox_q(γ, y + γ g_y).
/// `grad` is the gradient already evaluated at (x, y).
PrimalDualPoint fbs_step(const GradPair& grad, const ProxOracle& prox_p,
                         const ProxOracle& prox_q, double gamma, const Vector& x,
                         const Vector& y);

/// Same as above but evaluates the gradient oracle at (x, y) first.
PrimalDualPoint fbs_step(const SaddleGradient& grad, const ProxOracle& prox_p,
                         const ProxOracle& prox_q, double gamma, const Vector& x,
                         const Vector& y);

}  // namespace fal
