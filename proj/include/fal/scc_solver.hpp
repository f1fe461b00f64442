#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fal/core.hpp"
#include "fal/kkt.hpp"
#include "fal/trace.hpp"

namespace fal {

// min_x max_y h̄(x,y) + p(x) − q(y) with h̄ σx-strongly convex in x,
// σy-strongly concave in y and L-smooth on dom p × dom q.
struct SccProblem {
  SaddleGradient grad;
  ProxOracle prox_p;
  ProxOracle prox_q;
  double sigma_x = 0.0;
  double sigma_y = 0.0;
  double L = 0.0;
  SaddleGradientInto grad_into;  // optional in-place form of `grad`

  void validate() const;
};

// Step sizes and momentum weights of the accelerated saddle method.
struct SccParams {
  double alpha = 0.0;     // min{1, √(8σy/σx)}
  double eta_z = 0.0;     // σx/2
  double eta_y = 0.0;     // min{1/(2σy), 4/(ᾱσx)}
  double zeta = 0.0;      // (2√5 (1 + 8L/σx))⁻¹
  double gamma_x = 0.0;   // 8/σx
  double gamma_y = 0.0;   // 8/σx
  double zeta_bar = 0.0;  // min{σx, σy}/L²

  static double beta(std::int64_t t) { return 2.0 / (static_cast<double>(t) + 3.0); }
};

SccParams make_params(double sigma_x, double sigma_y, double L);

// Zero means "use the default".
struct SafeguardLimits {
  std::int64_t max_outer = 0;
  std::int64_t max_inner = 0;
};

// 10·⌈96√2(1 + 8L/σx)⌉ inner iterations per outer iteration.
std::int64_t default_max_inner(const SccParams& params, double sigma_x, double L);

// Ten times an iteration-bound analogue computed with a unit-scale
// initial gap (the true gap needs H̄* and H̄_low, which the solver does not have).
std::int64_t default_max_outer(const SccParams& params, double sigma_x, double sigma_y, double L,
                               double eps_bar);

// Outer-loop variables. The primal sequence is carried in the scaled form
// z = −σx x.
struct SccState {
  std::int64_t k = 0;
  Vector z;
  Vector y;
  Vector z_f;
  Vector y_f;
};

// Start state with z = z_f = z̄⁰ and y = y_f = ȳ⁰.
SccState initial_state(const Vector& z0, const Vector& y0);

// Intermediate quantities of one outer iteration, exposed for testing.
struct OuterStepDetail {
  Vector z_g, y_g;        // extrapolated anchors
  Vector x_anchor, y_anchor;  // (x^{k,-1}, y^{k,-1})
  Vector x0, y0;          // first prox pair of the inner loop
  Vector b_x0, b_y0;      // prox residual vectors at t = 0
  std::int64_t inner_iterations = 0;
};

// a-field of the inner extragradient loop given ∇ĥ at (x, y):
//   a_x = ∇_x ĥ + σx(x − z_g/σx)/2
//   a_y = −∇_y ĥ + σy y + σx(y − y_g)/8
GradPair a_field(const GradPair& grad_hat, double sigma_x, double sigma_y, const Vector& z_g,
                 const Vector& y_g, const Vector& x, const Vector& y);

// ∇ĥ = ∇h̄ − (σx x, −σy y).
GradPair hat_gradient(const GradPair& grad_bar, double sigma_x, double sigma_y, const Vector& x,
                      const Vector& y);

// True when the inner loop exits, i.e. when
//   γx‖a_x + b_x‖² + γy‖a_y + b_y‖² ≤ γx⁻¹‖x − x^{k,-1}‖² + γy⁻¹‖y − y^{k,-1}‖²
// (the continue-condition uses strict ">").
bool inner_loop_done(const SccParams& params, const Vector& ab_x, const Vector& ab_y,
                     const Vector& dx, const Vector& dy);

// Counts gradient and prox calls made by the solver.
struct SccCounts {
  std::int64_t grad = 0;
  std::int64_t prox_p = 0;
  std::int64_t prox_q = 0;
};

// Executes one outer iteration (extrapolation, anchor, inner loop, f-point
// and momentum updates). Throws IterationLimitExceeded when the inner loop
// exceeds `max_inner`.
SccState outer_step(const SccState& state, const SccProblem& prob, const SccParams& params,
                    std::int64_t max_inner, SccCounts* counts = nullptr,
                    OuterStepDetail* detail = nullptr);

struct SccOuterRecord {
  std::int64_t inner_iterations = 0;
  double residual = 0.0;
  SccCounts counts;  // cumulative after this outer iteration
};

struct SccOptions {
  SafeguardLimits limits;
  bool keep_records = false;
  SolveTrace* trace = nullptr;
};

struct SccResult {
  Vector x;  // x̃ of the terminating iteration
  Vector y;  // ỹ of the terminating iteration
  double residual = 0.0;
  double residual_x = 0.0;
  double residual_y = 0.0;
  std::int64_t outer_iterations = 0;
  std::int64_t inner_iterations = 0;  // total over all outer iterations
  SccCounts counts;
  std::vector<SccOuterRecord> records;
};

struct SccStart {
  Vector z0;  // in −σx·dom p
  Vector y0;  // in dom q
};

// Default start: z̄⁰ = −σx prox_p(1, 0), ȳ⁰ = prox_q(1, 0).
SccStart default_start(const SccProblem& prob, Index n, Index m);

// Runs outer iterations until the forward-backward certificate at
// (x^{k+1}, y^{k+1}) is at most eps_bar.
SccResult solve_scc(const SccProblem& prob, double eps_bar, const SccStart& start,
                    const SccOptions& options = {});

}  // namespace fal
