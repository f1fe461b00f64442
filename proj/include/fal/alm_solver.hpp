#pragma once

#include <cstdint>
#include <vector>

#include "fal/core.hpp"
#include "fal/kkt.hpp"
#include "fal/ncc_solver.hpp"
#include "fal/trace.hpp"

namespace fal {

struct AlmConfig {
  double eps = 0.0;   // target, in (0, 1)
  double tau = 0.0;   // shrink factor, in (0, 1)
  double eps0 = 0.0;  // in (tau * eps, 1]
  double Lambda = 0.0;
  Vector lambda_x0;
  Vector lambda_y0;
  Vector x0;
  Vector y0;
  Vector x_nf;  // ‖[c(x_nf)]₊‖ ≤ √eps, checked at entry

  SafeguardLimits scc_limits;
  std::int64_t ncc_max_outer = 0;

  double eps_k(std::int64_t k) const;
  double rho_k(std::int64_t k) const { return 1.0 / eps_k(k); }

  // Throws InvalidParameter naming the offending field.
  void validate(const ConstrainedMinimaxProblem& prob) const;
};

struct MultiplierPair {
  Vector lambda_x;
  Vector lambda_y;
};

struct AlmRecord {
  std::int64_t k = 0;
  double eps_k = 0.0;
  double rho_k = 0.0;
  double L_k = 0.0;
  bool used_x_nf = false;
  std::int64_t ncc_outer = 0;
  double ncc_displacement = 0.0;
  MultiplierPair multipliers;  // after the update of this iteration
  double feas_c = 0.0;
  double feas_d = 0.0;
  double comp_c = 0.0;
  double comp_d = 0.0;
  OracleCounters counters;  // cumulative
};

struct AlmOutput {
  Vector x;
  Vector y;
  Vector lambda_x;        // safeguarded multiplier after the last update
  Vector lambda_y;
  Vector lambda_x_tilde;  // [λx^K + c(x^{K+1})/(ε₀τ^K)]₊
  KktResiduals kkt;       // at (x, y) with (λ̃x, λy)
  std::int64_t outer_iterations = 0;
  OracleCounters counters;
  std::vector<AlmRecord> records;
};

// Warm start: x_k unless the x-part AL value at x_nf is strictly smaller.
Vector choose_init(const ConstrainedMinimaxProblem& prob, const Vector& x_k, const Vector& x_nf,
                   const Vector& y_k, const Vector& lambda_x, double rho);

// L_∇f + ρL_c² + ρ c_hi L_∇c + ‖λx‖L_∇c + ρL_d² + ρ d_hi L_∇d + ‖λy‖L_∇d.
double lipschitz_Lk(const ProblemConstants& consts, double rho, double norm_lambda_x,
                    double norm_lambda_y);

// Same, with constants of an absent constraint block treated as zero.
double lipschitz_Lk(const ConstrainedMinimaxProblem& prob, double rho, double norm_lambda_x,
                    double norm_lambda_y);

// Smooth part of the augmented Lagrangian as a nonconvex-concave problem.
NccProblem al_subproblem(const ConstrainedMinimaxProblem& prob, const Vector& lambda_x,
                         const Vector& lambda_y, double rho, double L_k);

// λx⁺ = Π_{B⁺_Λ}(λx + ρc), λy⁺ = [λy + ρd]₊.
MultiplierPair update_multipliers(const Vector& lambda_x, const Vector& lambda_y,
                                  const Vector& c_val, const Vector& d_val, double rho,
                                  double Lambda);

// Number of outer iterations minus one: ⌈(log ε − log ε₀)/log τ⌉₊.
std::int64_t alm_iteration_count(double eps, double eps0, double tau);

// Runs the augmented Lagrangian loop until ε_k ≤ ε. Oracle counters cover
// every call made by the nested solvers; the KKT bundle is evaluated with
// uncounted oracles.
AlmOutput solve_alm(const ConstrainedMinimaxProblem& prob, const AlmConfig& cfg,
                    SolveTrace* trace = nullptr);

}  // namespace fal
