#include "fal/problems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "fal/prox.hpp"

namespace fal {

namespace {

using Matrix = Eigen::MatrixXd;

SaddleGradient value_form(const SaddleGradientInto& into) {
  return [into](const Vector& x, const Vector& y) {
    GradPair g;
    into(x, y, g);
    return g;
  };
}

double param(const InstanceParams& params, const std::string& key, double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

void check_keys(const std::string& name, const InstanceParams& params,
                const std::vector<std::string>& allowed) {
  for (const auto& [key, value] : params) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw InvalidParameter(fmt::format("unknown parameter '{}' for instance {}", key, name));
    if (!std::isfinite(value))
      throw InvalidParameter(fmt::format("parameter '{}' must be finite", key));
  }
}

void require_positive(const InstanceParams& params, const std::string& key, double value) {
  if (!(value > 0.0)) throw InvalidParameter(fmt::format("parameter '{}' must be positive", key));
  (void)params;
}

double spectral_norm_sym(const Matrix& H) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(H, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double min_eig(const Matrix& S) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(S, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

// Minimum of ½xᵀAx + gᵀx over the box [−R, R]ⁿ (A positive definite) by
// enumerating every face: each coordinate is free, at −R or at +R.
double box_qp_min(const Matrix& A, const Vector& g, double R) {
  const Index n = A.rows();
  Index faces = 1;
  for (Index i = 0; i < n; ++i) faces *= 3;
  double best = std::numeric_limits<double>::infinity();
  for (Index code = 0; code < faces; ++code) {
    Vector x = Vector::Zero(n);
    std::vector<Index> free;
    Index c = code;
    for (Index i = 0; i < n; ++i, c /= 3) {
      const int s = static_cast<int>(c % 3);
      if (s == 0) free.push_back(i);
      else x(i) = s == 1 ? -R : R;
    }
    if (!free.empty()) {
      const Index k = static_cast<Index>(free.size());
      Matrix Aff(k, k);
      Vector rhs(k);
      for (Index a = 0; a < k; ++a) {
        rhs(a) = -g(free[a]);
        for (Index j = 0; j < n; ++j)
          if (std::find(free.begin(), free.end(), j) == free.end()) rhs(a) -= A(free[a], j) * x(j);
        for (Index b = 0; b < k; ++b) Aff(a, b) = A(free[a], free[b]);
      }
      const Vector sol = Aff.ldlt().solve(rhs);
      bool inside = true;
      for (Index a = 0; a < k; ++a) {
        if (std::abs(sol(a)) > R) inside = false;
        x(free[a]) = sol(a);
      }
      if (!inside) continue;
    }
    best = std::min(best, 0.5 * x.dot(A * x) + g.dot(x));
  }
  return best;
}

// h̄(x,y) = ½xᵀAx + xᵀBy − ½yᵀCy on [−R, R]^(n+m).
BuiltinInstance quadratic_saddle(const std::string& name, const std::string& description,
                                 const Matrix& A, const Matrix& B, const Matrix& C, double R) {
  const Index n = A.rows();
  const Index m = C.rows();
  BuiltinInstance inst;
  inst.name = name;
  inst.description = description;

  ConstrainedMinimaxProblem& p = inst.problem;
  p.n = n;
  p.m = m;
  p.f_value = [A, B, C](const Vector& x, const Vector& y) {
    return 0.5 * x.dot(A * x) + x.dot(B * y) - 0.5 * y.dot(C * y);
  };
  p.grad_f_into = [A, B, C](const Vector& x, const Vector& y, GradPair& g) {
    g.x.noalias() = A * x;
    g.x.noalias() += B * y;
    g.y.noalias() = B.transpose() * x;
    g.y.noalias() -= C * y;
  };
  p.grad_f = value_form(p.grad_f_into);
  p.prox_p = prox_box(n, -R, R);
  p.prox_q = prox_box(m, -R, R);
  p.p_value = [](const Vector&) { return 0.0; };
  p.q_value = [](const Vector&) { return 0.0; };

  Matrix H(n + m, n + m);
  H << A, B, B.transpose(), -C;
  inst.L = spectral_norm_sym(H);
  inst.sigma_x = min_eig(A);
  inst.sigma_y = min_eig(C);
  p.constants.L_grad_f = inst.L;
  p.constants.D_x = 2.0 * R * std::sqrt(static_cast<double>(n));
  p.constants.D_y = 2.0 * R * std::sqrt(static_cast<double>(m));

  // Concave in y, so the minimum over the box sits at a y-vertex.
  double low = std::numeric_limits<double>::infinity();
  for (Index v = 0; v < (Index{1} << m); ++v) {
    Vector y(m);
    for (Index j = 0; j < m; ++j) y(j) = (v >> j) & 1 ? R : -R;
    low = std::min(low, box_qp_min(A, B * y, R) - 0.5 * y.dot(C * y));
  }
  inst.H_star = 0.0;
  inst.H_low = low;

  inst.x_start = Vector::Zero(n);
  inst.y_start = Vector::Zero(m);
  inst.lo_x = Vector::Constant(n, -R);
  inst.hi_x = Vector::Constant(n, R);
  inst.lo_y = Vector::Constant(m, -R);
  inst.hi_y = Vector::Constant(m, R);
  ReferenceSolution ref;
  ref.x = Vector::Zero(n);
  ref.y = Vector::Zero(m);
  ref.tolerance = 0.0;
  ref.note = "unique saddle point, interior of the box";
  inst.references.push_back(ref);
  return inst;
}

BuiltinInstance make_quad_saddle_1d(const InstanceParams& params) {
  check_keys("quad_saddle_1d", params, {"a", "b", "c", "radius"});
  const double a = param(params, "a", 1.0);
  const double b = param(params, "b", 1.0);
  const double c = param(params, "c", 1.0);
  const double R = param(params, "radius", 10.0);
  require_positive(params, "a", a);
  require_positive(params, "c", c);
  require_positive(params, "radius", R);
  Matrix A(1, 1), B(1, 1), C(1, 1);
  A << a;
  B << b;
  C << c;
  return quadratic_saddle("quad_saddle_1d", "1-D quadratic saddle a/2 x^2 + b xy - c/2 y^2 on a box",
                          A, B, C, R);
}

BuiltinInstance make_quad_saddle_box(const InstanceParams& params) {
  check_keys("quad_saddle_box", params, {"coupling", "radius"});
  const double k = param(params, "coupling", 1.0);
  const double R = param(params, "radius", 2.0);
  require_positive(params, "radius", R);
  Matrix A(2, 2), B(2, 2), C(2, 2);
  A << 2.0, 0.0, 0.0, 1.0;
  B << 1.0, 0.5, 0.0, 1.0;
  B *= k;
  C << 1.0, 0.0, 0.0, 3.0;
  return quadratic_saddle("quad_saddle_box",
                          "2-D coupled quadratic saddle with interior saddle at the origin", A, B,
                          C, R);
}

BuiltinInstance make_ncc_toy(const InstanceParams& params) {
  check_keys("ncc_toy", params, {"coupling", "center", "radius"});
  const double k = param(params, "coupling", 0.1);
  const double c0 = param(params, "center", 0.5);
  const double R = param(params, "radius", 1.0);
  require_positive(params, "radius", R);

  BuiltinInstance inst;
  inst.name = "ncc_toy";
  inst.description = "-(x - center)^2 + coupling * x * y on a box, concave (affine) in y";
  ConstrainedMinimaxProblem& p = inst.problem;
  p.n = 1;
  p.m = 1;
  p.f_value = [k, c0](const Vector& x, const Vector& y) {
    return -(x(0) - c0) * (x(0) - c0) + k * x(0) * y(0);
  };
  p.grad_f_into = [k, c0](const Vector& x, const Vector& y, GradPair& g) {
    g.x.resize(1);
    g.y.resize(1);
    g.x(0) = -2.0 * (x(0) - c0) + k * y(0);
    g.y(0) = k * x(0);
  };
  p.grad_f = value_form(p.grad_f_into);
  p.prox_p = prox_box(1, -R, R);
  p.prox_q = prox_box(1, -R, R);
  p.p_value = [](const Vector&) { return 0.0; };
  p.q_value = [](const Vector&) { return 0.0; };
  inst.L = 1.0 + std::sqrt(1.0 + k * k);
  p.constants.L_grad_f = inst.L;
  p.constants.D_x = 2.0 * R;
  p.constants.D_y = 2.0 * R;

  // max_y of the affine coupling is R|kx|; the resulting envelope is concave
  // on each half-interval, so its minimum is at −R, 0 or R.
  auto envelope = [&](double x) { return -(x - c0) * (x - c0) + R * std::abs(k * x); };
  inst.H_star = std::min({envelope(-R), envelope(0.0), envelope(R)});
  double low = std::numeric_limits<double>::infinity();
  for (double x : {-R, R})
    for (double y : {-R, R}) low = std::min(low, -(x - c0) * (x - c0) + k * x * y);
  inst.H_low = low;
  inst.x_start = Vector::Zero(1);
  inst.y_start = Vector::Zero(1);
  inst.max_H_start = envelope(0.0);
  inst.lo_x = inst.lo_y = Vector::Constant(1, -R);
  inst.hi_x = inst.hi_y = Vector::Constant(1, R);

  // Stationary candidates: box vertices and the partial-interior points of
  // each face, kept when the projected-gradient map fixes them.
  std::vector<std::pair<double, double>> cand;
  for (double y : {-R, R}) {
    cand.emplace_back(-R, y);
    cand.emplace_back(R, y);
    cand.emplace_back(c0 + k * y / 2.0, y);
  }
  if (k != 0.0) cand.emplace_back(0.0, -2.0 * c0 / k);
  for (auto [x, y] : cand) {
    if (std::abs(x) > R || std::abs(y) > R) continue;
    const double gx = -2.0 * (x - c0) + k * y;
    const double gy = k * x;
    const double rx = x - std::clamp(x - gx, -R, R);
    const double ry = y - std::clamp(y + gy, -R, R);
    if (std::abs(rx) > 1e-12 || std::abs(ry) > 1e-12) continue;
    ReferenceSolution ref;
    ref.x = Vector::Constant(1, x);
    ref.y = Vector::Constant(1, y);
    ref.tolerance = 1e-12;
    ref.note = "stationary point from the face enumeration";
    inst.references.push_back(ref);
  }
  return inst;
}

BuiltinInstance make_constrained_toy(const InstanceParams& params) {
  check_keys("constrained_toy", params, {});
  const double R = 2.0;
  BuiltinInstance inst;
  inst.name = "constrained_toy";
  inst.description =
      "(x-1)^2 + xy - y^2 on [-2,2]^2 with c(x) = x^2 - 1 <= 0 and d(x,y) = x + y - 1 <= 0";
  ConstrainedMinimaxProblem& p = inst.problem;
  p.n = 1;
  p.m = 1;
  p.n_c = 1;
  p.n_d = 1;
  p.f_value = [](const Vector& x, const Vector& y) {
    return (x(0) - 1.0) * (x(0) - 1.0) + x(0) * y(0) - y(0) * y(0);
  };
  p.grad_f_into = [](const Vector& x, const Vector& y, GradPair& g) {
    g.x.resize(1);
    g.y.resize(1);
    g.x(0) = 2.0 * (x(0) - 1.0) + y(0);
    g.y(0) = x(0) - 2.0 * y(0);
  };
  p.grad_f = value_form(p.grad_f_into);
  p.c_value_into = [](const Vector& x, Vector& out) {
    out.resize(1);
    out(0) = x(0) * x(0) - 1.0;
  };
  p.c_value = [f = p.c_value_into](const Vector& x) {
    Vector out;
    f(x, out);
    return out;
  };
  p.jac_c_t_apply_into = [](const Vector& x, const Vector& v, Vector& out) {
    out.resize(1);
    out(0) = 2.0 * x(0) * v(0);
  };
  p.jac_c_t_apply = [f = p.jac_c_t_apply_into](const Vector& x, const Vector& v) {
    Vector out;
    f(x, v, out);
    return out;
  };
  p.d_value_into = [](const Vector& x, const Vector& y, Vector& out) {
    out.resize(1);
    out(0) = x(0) + y(0) - 1.0;
  };
  p.d_value = [f = p.d_value_into](const Vector& x, const Vector& y) {
    Vector out;
    f(x, y, out);
    return out;
  };
  p.jac_d_t_apply_into = [](const Vector&, const Vector&, const Vector& v, GradPair& g) {
    g.x.resize(1);
    g.y.resize(1);
    g.x(0) = v(0);
    g.y(0) = v(0);
  };
  p.jac_d_t_apply = [f = p.jac_d_t_apply_into](const Vector& x, const Vector& y,
                                                const Vector& v) {
    GradPair g;
    f(x, y, v, g);
    return g;
  };
  p.prox_p = prox_box(1, -R, R);
  p.prox_q = prox_box(1, -R, R);
  p.p_value = [](const Vector&) { return 0.0; };
  p.q_value = [](const Vector&) { return 0.0; };

  ProblemConstants& k = p.constants;
  k.L_F = std::sqrt(68.0);  // ‖∇f‖ at (−2, −2)
  k.L_grad_f = std::sqrt(5.0);
  k.L_c = 2.0 * R;
  k.L_grad_c = 2.0;
  k.L_d = std::sqrt(2.0);
  k.L_grad_d = 0.0;
  k.D_x = 2.0 * R;
  k.D_y = 2.0 * R;
  k.c_hi = R * R - 1.0;
  k.d_hi = 2.0 * R + 1.0;
  k.theta_a = 0.75;
  k.delta_c = 1.0;  // |c'(x)| = 2|x| ≥ 1 whenever c(x) ≥ −0.75
  k.theta_f = 1.0;
  k.delta_d = 1.0;  // −d(x, −2) = 3 − x ≥ 1
  k.F_hi = 10.0;    // at (−2, −1)
  k.F_low = -7.0;   // at (2, −2)
  k.f_star_low = -2.0;  // at x = 2, y = −1
  inst.L = std::sqrt(5.0);

  inst.x_start = Vector::Zero(1);
  inst.y_start = Vector::Zero(1);
  inst.lo_x = inst.lo_y = Vector::Constant(1, -R);
  inst.hi_x = inst.hi_y = Vector::Constant(1, R);

  ReferenceSolution ref;
  ref.x = Vector::Constant(1, 1.0);
  ref.y = Vector::Constant(1, 0.0);
  ref.lambda_x = Vector::Constant(1, 0.5);
  ref.lambda_y = Vector::Constant(1, 1.0);
  ref.tolerance = 1e-12;
  ref.note = "both constraints active; multipliers from the 2x2 stationarity system";
  inst.references.push_back(ref);
  return inst;
}

}  // namespace

std::vector<InstanceInfo> list_instances() {
  return {
      {"quad_saddle_1d", "1-D quadratic saddle a/2 x^2 + b xy - c/2 y^2 on a box",
       {"a", "b", "c", "radius"}},
      {"quad_saddle_box", "2-D coupled quadratic saddle with interior saddle at the origin",
       {"coupling", "radius"}},
      {"ncc_toy", "-(x - center)^2 + coupling * x * y on a box, concave (affine) in y",
       {"coupling", "center", "radius"}},
      {"constrained_toy",
       "(x-1)^2 + xy - y^2 on [-2,2]^2 with c(x) = x^2 - 1 <= 0 and d(x,y) = x + y - 1 <= 0",
       {}},
  };
}

BuiltinInstance registry(const std::string& name, const InstanceParams& params) {
  if (name == "quad_saddle_1d") return make_quad_saddle_1d(params);
  if (name == "quad_saddle_box") return make_quad_saddle_box(params);
  if (name == "ncc_toy") return make_ncc_toy(params);
  if (name == "constrained_toy") return make_constrained_toy(params);
  throw NotFound(fmt::format("unknown instance '{}'", name));
}

Vector find_near_feasible(const ConstrainedMinimaxProblem& prob, double eta, const Vector& start,
                          const NearFeasibleOptions& options) {
  if (!(eta > 0.0 && eta <= 1.0)) throw InvalidParameter("eta must lie in (0, 1]");
  if (prob.n_c == 0) return start;

  auto phi = [&](const Vector& x) { return positive_part(prob.c_value(x)).squaredNorm(); };
  Vector x = start;
  double f = phi(x);
  if (f <= eta * eta) return x;

  const double L_c = require(prob.constants.L_c, "L_c");
  const double c_hi = require(prob.constants.c_hi, "c_hi");
  const double L_gc = require(prob.constants.L_grad_c, "L_grad_c");
  const double step = 1.0 / (2.0 * (L_c * L_c + c_hi * L_gc));
  if (!std::isfinite(step)) throw InvalidParameter("near-feasible step is not finite");

  Vector best = x;
  double best_f = f;
  for (std::int64_t it = 0; it < options.max_iterations; ++it) {
    const Vector g = 2.0 * prob.jac_c_t_apply(x, positive_part(prob.c_value(x)));
    x = prob.prox_p(step, x - step * g);
    f = phi(x);
    check_finite(f, "near-feasible merit");
    if (f < best_f) {
      best_f = f;
      best = x;
    }
    if (f <= eta * eta) return x;
  }
  throw FeasibilityNotFound(
      fmt::format("no {}-feasible point after {} iterations (best ||[c]_+||^2 = {})", eta,
                  options.max_iterations, best_f),
      best, best_f);
}

}  // namespace fal
