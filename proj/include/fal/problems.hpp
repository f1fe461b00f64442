#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fal/core.hpp"

namespace fal {

class FeasibilityNotFound : public Error {
 public:
  FeasibilityNotFound(const std::string& what, Vector best_x, double best_phi)
      : Error(what), best_x_(std::move(best_x)), best_phi_(best_phi) {}
  const Vector& best_x() const noexcept { return best_x_; }
  double best_phi() const noexcept { return best_phi_; }

 private:
  Vector best_x_;
  double best_phi_;
};

struct ReferenceSolution {
  Vector x;
  Vector y;
  std::optional<Vector> lambda_x;
  std::optional<Vector> lambda_y;
  double tolerance = 1e-6;  // KKT residual level the point is known to satisfy
  std::string note;
};

struct BuiltinInstance {
  std::string name;
  std::string description;
  ConstrainedMinimaxProblem problem;

  // Strong convexity/concavity moduli (saddle instances only).
  std::optional<double> sigma_x;
  std::optional<double> sigma_y;
  double L = 0.0;  // smoothness constant of f on the box

  std::optional<double> H_star;       // min-max value
  std::optional<double> H_low;        // min of F over the box
  std::optional<double> max_H_start;  // max_y F(x_start, y)

  Vector x_start;
  Vector y_start;
  Vector lo_x, hi_x, lo_y, hi_y;  // box domains
  std::vector<ReferenceSolution> references;
};

using InstanceParams = std::map<std::string, double>;

struct InstanceInfo {
  std::string name;
  std::string description;
  std::vector<std::string> parameters;  // overridable keys
};

std::vector<InstanceInfo> list_instances();

// Builds a named instance. Unknown names throw NotFound; unknown or invalid
// parameters throw InvalidParameter naming the key.
BuiltinInstance registry(const std::string& name, const InstanceParams& params = {});

struct NearFeasibleOptions {
  std::int64_t max_iterations = 100000;
};

// Projected gradient on φ(x) = ‖[c(x)]₊‖² from `start` until φ ≤ η².
Vector find_near_feasible(const ConstrainedMinimaxProblem& prob, double eta, const Vector& start,
                          const NearFeasibleOptions& options = {});

}  // namespace fal
