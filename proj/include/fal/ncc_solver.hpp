#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fal/scc_solver.hpp"

namespace fal {

// min_x max_y h(x,y) + p(x) − q(y) with h(x,·) concave and h L-smooth.
struct NccProblem {
  SaddleGradient grad;
  ProxOracle prox_p;
  ProxOracle prox_q;
  double L = 0.0;
  double D_y = 0.0;
  SaddleGradientInto grad_into;  // optional in-place form of `grad`

  void validate() const;
};

struct NccConfig {
  double eps = 0.0;
  double eps_hat0 = 0.0;  // in (0, eps/2]
  std::optional<Vector> anchor_y;  // defaults to the start y
  SafeguardLimits scc_limits;
  std::int64_t max_outer = 0;  // 0 selects the default
  bool keep_records = true;

  double eps_hat(std::int64_t k) const { return eps_hat0 / static_cast<double>(k + 1); }
  void validate() const;
};

// Strongly monotone proximal subproblem around x_k:
//   h_k(x,y) = h(x,y) − ε‖y − ŷ⁰‖²/(4D_y) + L‖x − x_k‖²
// with σx = L, σy = ε/(2D_y), L̄ = 3L + ε/(2D_y).
SccProblem build_subproblem(const NccProblem& prob, const Vector& x_k, const Vector& anchor_y,
                            double eps);

struct NccRecord {
  std::int64_t k = 0;
  double eps_hat = 0.0;
  double displacement = 0.0;  // ‖x^{k+1} − x^k‖
  double scc_residual = 0.0;
  std::int64_t scc_outer = 0;
  std::int64_t scc_inner = 0;
  // Bounds on the certified residuals of the original problem at x^{k+1}.
  double x_residual_bound = 0.0;  // ε̂_k + 2L‖x^{k+1} − x^k‖
  double y_residual_bound = 0.0;  // ε̂_k + ε‖y^{k+1} − ŷ⁰‖/(2D_y)
  SccCounts counts;               // cumulative
  Vector x;                       // (x^{k+1}, y^{k+1})
  Vector y;
};

struct NccResult {
  Vector x;
  Vector y;
  Vector x_prev;  // x^k of the terminating iteration
  std::int64_t outer_iterations = 0;
  double displacement = 0.0;
  SccCounts counts;
  std::vector<NccRecord> records;
};

struct NccStart {
  Vector x;
  Vector y;
};

// Default outer cap: ten times the outer bound evaluated with a unit
// initial gap, and at least 100.
std::int64_t default_ncc_max_outer(const NccProblem& prob, const NccConfig& cfg);

// Proximal-point loop. Stops at the first k with ‖x^{k+1} − x^k‖ ≤ ε/(4L).
NccResult solve_ncc(const NccProblem& prob, const NccConfig& cfg, const NccStart& start,
                    SolveTrace* trace = nullptr);

}  // namespace fal
