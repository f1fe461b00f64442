#pragma once

#include <cstdint>
#include <optional>

#include "fal/core.hpp"

namespace fal {

// ⌈v⌉₊ with NaN and −∞ mapped to 0.
double ceil_plus(double v);

// log(v), or −∞ for v ≤ 0.
double safe_log(double v);

// ---------------------------------------------------------------------------
// Strongly-convex-strongly-concave saddle solver.

struct SccBoundInputs {
  std::optional<double> sigma_x, sigma_y, L, eps_bar;
  std::optional<double> D_x, D_y;
  std::optional<double> H_star, H_low;  // optimal value and lower bound of the saddle objective
};

struct SccBounds {
  double alpha = 0.0;
  double delta = 0.0;   // (2 + ᾱ⁻¹)σx D_x² + max{2σy, ᾱσx/4} D_y²
  double theta0 = 0.0;  // δ̄ + 2ᾱ⁻¹(H̄* − H̄_low), upper bound on the initial potential
  double K = 0.0;       // outer iterations
  double T = 0.0;       // inner iterations per outer iteration
  double N = 0.0;       // gradient and prox evaluations (each)
};

SccBounds scc_bounds(const SccBoundInputs& in);

// ---------------------------------------------------------------------------
// Nonconvex-concave proximal-point solver.

struct NccBoundInputs {
  std::optional<double> L, eps, eps_hat0;
  std::optional<double> D_x, D_y;
  std::optional<double> max_H_start;  // max_y H(x̂⁰, y)
  std::optional<double> H_star, H_low;
};

struct NccBounds {
  double alpha = 0.0;
  double delta = 0.0;
  double T = 0.0;  // outer iterations ≤ T + 1
  double N = 0.0;
  double max_H_output = 0.0;  // upper bound on max_y H(x_ε, y)
};

NccBounds ncc_bounds(const NccBoundInputs& in);

// ---------------------------------------------------------------------------
// Augmented Lagrangian outer loop.

struct AlmBoundInputs {
  ProblemConstants constants;
  std::optional<double> eps, eps0, tau, Lambda;
  double norm_lambda_y0 = 0.0;
  // Penalty used for the paper-literal M; defaults to the final ρ_K.
  std::optional<double> rho_literal;
};

struct AlmThresholds {
  double feas_c = 0.0;  // bound on ‖[c]₊‖
  double comp_c = 0.0;  // bound on |⟨λ̃x, c⟩|
  double feas_d = 0.0;  // bound on ‖[d]₊‖
  double comp_d = 0.0;  // bound on |⟨λy, d⟩|
};

struct AlmBounds {
  double L = 0.0;
  double alpha = 0.0;
  double delta = 0.0;
  double M = 0.0;          // d_hi² coefficient
  double M_literal = 0.0;  // ρ d_hi² coefficient, at rho_literal
  double rho_literal = 0.0;
  double T = 0.0;
  std::int64_t K = 0;
  double N = 0.0;
  double r = 0.0;
  AlmThresholds thresholds;
  bool eps_condition = false;
};

AlmBounds alm_bounds(const AlmBoundInputs& in);

AlmThresholds alm_thresholds(const AlmBoundInputs& in);

// Whether ε is small enough for the output guarantees to hold.
bool check_eps_condition(const AlmBoundInputs& in);

}  // namespace fal
