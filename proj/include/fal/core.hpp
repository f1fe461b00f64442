#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Core>

namespace fal {

using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Error hierarchy. Every failure the library reports derives from fal::Error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

class NumericalFailure : public Error {
 public:
  using Error::Error;
};

class NotFound : public Error {
 public:
  using Error::Error;
};

class MissingConstant : public Error {
 public:
  explicit MissingConstant(std::string symbol)
      : Error("missing constant: " + symbol), symbol_(std::move(symbol)) {}
  const std::string& symbol() const noexcept { return symbol_; }

 private:
  std::string symbol_;
};

// A safeguard cap was hit. Carries the best point seen and its certificate.
class IterationLimitExceeded : public Error {
 public:
  IterationLimitExceeded(const std::string& what, Vector x, Vector y, double residual)
      : Error(what), x_(std::move(x)), y_(std::move(y)), residual_(residual) {}
  const Vector& x() const noexcept { return x_; }
  const Vector& y() const noexcept { return y_; }
  double residual() const noexcept { return residual_; }

 private:
  Vector x_;
  Vector y_;
  double residual_;
};

// A gradient (or any (x, y)-block quantity) of a saddle function.
struct GradPair {
  Vector x;
  Vector y;
};

using ProxOracle = std::function<Vector(double gamma, const Vector& v)>;
using SaddleGradient = std::function<GradPair(const Vector& x, const Vector& y)>;
// In-place form: writes into `out`, reusing its storage.
using SaddleGradientInto = std::function<void(const Vector& x, const Vector& y, GradPair& out)>;

// User-declared smoothness and geometry constants. Unset entries are only
// an error when a bound formula that needs them is evaluated.
struct ProblemConstants {
  std::optional<double> L_F;
  std::optional<double> L_grad_f;
  std::optional<double> L_c;
  std::optional<double> L_grad_c;
  std::optional<double> L_d;
  std::optional<double> L_grad_d;
  std::optional<double> D_x;
  std::optional<double> D_y;
  std::optional<double> c_hi;
  std::optional<double> d_hi;
  std::optional<double> delta_c;
  std::optional<double> theta_a;
  std::optional<double> theta_f;
  std::optional<double> delta_d;
  std::optional<double> F_hi;
  std::optional<double> F_low;
  std::optional<double> f_star_low;

  // Throws InvalidParameter on negative Lipschitz/diameter entries,
  // nonpositive qualification constants, or inconsistent value bounds.
  void validate() const;
};

// Returns the value of an optional constant or throws MissingConstant.
double require(const std::optional<double>& value, std::string_view symbol);

// min_x max_y f(x,y) + p(x) - q(y)  s.t.  c(x) <= 0, d(x,y) <= 0.
//
// Jacobians are only available as transpose-apply products:
//   jac_c_t_apply(x, v)    = ∇c(x) v            (n-vector, v has n_c entries)
//   jac_d_t_apply(x, y, v) = (∇_x d v, ∇_y d v) (v has n_d entries)
// p and q enter only through their proximal operators; p_value and q_value
// are optional and used for diagnostics.
struct ConstrainedMinimaxProblem {
  Index n = 0;
  Index m = 0;
  Index n_c = 0;
  Index n_d = 0;

  std::function<double(const Vector&, const Vector&)> f_value;
  SaddleGradient grad_f;
  std::function<Vector(const Vector&)> c_value;
  std::function<Vector(const Vector&, const Vector&)> jac_c_t_apply;
  std::function<Vector(const Vector&, const Vector&)> d_value;
  std::function<GradPair(const Vector&, const Vector&, const Vector&)> jac_d_t_apply;
  ProxOracle prox_p;
  ProxOracle prox_q;
  std::function<double(const Vector&)> p_value;
  std::function<double(const Vector&)> q_value;

  // Optional in-place forms of the smooth oracles. When set, solvers use them
  // on hot paths; they must agree with the value forms.
  SaddleGradientInto grad_f_into;
  std::function<void(const Vector&, Vector&)> c_value_into;
  std::function<void(const Vector&, const Vector&, Vector&)> jac_c_t_apply_into;
  std::function<void(const Vector&, const Vector&, Vector&)> d_value_into;
  std::function<void(const Vector&, const Vector&, const Vector&, GradPair&)> jac_d_t_apply_into;

  ProblemConstants constants;

  // Evaluates c / d, returning an empty vector when the block is absent.
  Vector eval_c(const Vector& x) const;
  Vector eval_d(const Vector& x, const Vector& y) const;
};

// Oracle calls through the in-place form when present, else the value form.
void grad_f_to(const ConstrainedMinimaxProblem& prob, const Vector& x, const Vector& y,
               GradPair& out);
void c_value_to(const ConstrainedMinimaxProblem& prob, const Vector& x, Vector& out);
void jac_c_t_apply_to(const ConstrainedMinimaxProblem& prob, const Vector& x, const Vector& v,
                      Vector& out);
void d_value_to(const ConstrainedMinimaxProblem& prob, const Vector& x, const Vector& y,
                Vector& out);
void jac_d_t_apply_to(const ConstrainedMinimaxProblem& prob, const Vector& x, const Vector& y,
                      const Vector& v, GradPair& out);

// Counts of the fundamental operations. A prox call with any step size
// counts as one evaluation.
struct OracleCounters {
  std::uint64_t n_grad_f = 0;
  std::uint64_t n_grad_c = 0;
  std::uint64_t n_grad_d = 0;
  std::uint64_t n_prox_p = 0;
  std::uint64_t n_prox_q = 0;

  bool operator==(const OracleCounters&) const = default;
};

// Returns a copy of `prob` whose gradient, Jacobian-apply and prox oracles
// increment `counters`. The counters must outlive the returned problem.
ConstrainedMinimaxProblem instrument(const ConstrainedMinimaxProblem& prob,
                                     OracleCounters& counters);

struct ObjectiveValue {
  double value = 0.0;
  // False when p or q has no value oracle and only f(x,y) was summed.
  bool includes_nonsmooth = false;
};

ObjectiveValue eval_objective(const ConstrainedMinimaxProblem& prob, const Vector& x,
                              const Vector& y);

// Augmented Lagrangian
//   F + (‖[λx + ρc]₊‖² − ‖λx‖²)/(2ρ) − (‖[λy + ρd]₊‖² − ‖λy‖²)/(2ρ).
double eval_al(const ConstrainedMinimaxProblem& prob, const Vector& x, const Vector& y,
               const Vector& lambda_x, const Vector& lambda_y, double rho);

// x-part of the augmented Lagrangian (no y-constraint penalty).
double eval_al_x(const ConstrainedMinimaxProblem& prob, const Vector& x, const Vector& y,
                 const Vector& lambda_x, double rho);

struct FiniteDiffReport {
  double max_rel_error = 0.0;
  // False when the central-difference stencil left dom p x dom q.
  bool reliable = true;
  bool passed(double tol = 1e-5) const { return reliable && max_rel_error <= tol; }
};

// Central differences of f_value against grad_f at (x, y). The relative
// error per coordinate is |fd - g| / max(1, |g|).
FiniteDiffReport finite_diff_check(const ConstrainedMinimaxProblem& prob, const Vector& x,
                                   const Vector& y, double h);

// Throws NumericalFailure when any entry is NaN or infinite.
void check_finite(const Vector& v, std::string_view what);
void check_finite(double v, std::string_view what);

}  // namespace fal
