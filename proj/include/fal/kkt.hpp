#pragma once

#include <optional>

#include "fal/core.hpp"
#include "fal/prox.hpp"

namespace fal {

// Result of one forward-backward certification step at (x, y).
struct StationarityCertificate {
  Vector x;  // FBS point x̃
  Vector y;  // FBS point ỹ
  double residual_x = 0.0;
  double residual_y = 0.0;
  double residual = 0.0;  // Euclidean norm of the stacked residual
  double gamma = 0.0;
};

struct StrongMonotonicity {
  double sigma_x = 0.0;
  double sigma_y = 0.0;
};

// Step size used by the certifier: min(σx, σy)/L² when moduli are given,
// else 1/L.
double certificate_step(double L, std::optional<StrongMonotonicity> moduli);

// With (x̃, ỹ) = fbs_step(grad, γ, (x, y)) the residual is
//   ‖γ⁻¹(x − x̃, ỹ − y) − (∇(x, y) − ∇(x̃, ỹ))‖,
// and each block norm bounds dist(0, ∂_x H(x̃, ỹ)) resp. dist(0, ∂_y H(x̃, ỹ)).
StationarityCertificate certify_stationarity(const SaddleGradient& grad,
                                             const ProxOracle& prox_p, const ProxOracle& prox_q,
                                             double L, std::optional<StrongMonotonicity> moduli,
                                             const Vector& x, const Vector& y);

// Variant with explicit step and a precomputed gradient at (x, y).
StationarityCertificate certify_with_step(const SaddleGradient& grad, const GradPair& grad_xy,
                                          const ProxOracle& prox_p, const ProxOracle& prox_q,
                                          double gamma, const Vector& x, const Vector& y);

struct KktResiduals {
  double r_stat_x = 0.0;
  double r_stat_y = 0.0;
  double r_feas_c = 0.0;
  double r_feas_d = 0.0;
  double r_comp_c = 0.0;
  double r_comp_d = 0.0;

  double max() const;
};

// Gradient of the fixed-multiplier Lagrangian smooth part
//   (∇_x f + ∇c λx − ∇_x d λy,  ∇_y f − ∇_y d λy).
SaddleGradient lagrangian_gradient(const ConstrainedMinimaxProblem& prob, const Vector& lambda_x,
                                   const Vector& lambda_y);

// Smoothness constant of that Lagrangian: L_∇f + ‖λx‖ L_∇c + ‖λy‖ L_∇d.
double lagrangian_smoothness(const ProblemConstants& consts, const Vector& lambda_x,
                             const Vector& lambda_y);

// Six-residual bundle. Feasibility and complementarity are exact at (x, y);
// stationarity rows are the FBS certificate of the Lagrangian with step 1/L.
KktResiduals kkt_residuals(const ConstrainedMinimaxProblem& prob, const Vector& x,
                           const Vector& y, const Vector& lambda_x, const Vector& lambda_y);

}  // namespace fal
