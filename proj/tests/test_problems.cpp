#include <doctest.h>

#include <cmath>
#include <random>
#include <string>

#include "fal/kkt.hpp"
#include "fal/problems.hpp"
#include "fal/prox.hpp"
#include "support.hpp"

using namespace fal;
using namespace fal::testing;

namespace {

const std::vector<std::string> kNames = {"quad_saddle_1d", "quad_saddle_box", "ncc_toy",
                                         "constrained_toy"};

Vector sample_box(std::mt19937_64& rng, const Vector& lo, const Vector& hi) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vector v(lo.size());
  for (Index i = 0; i < lo.size(); ++i) v(i) = lo(i) + (hi(i) - lo(i)) * u(rng);
  return v;
}

// One-constraint problem c(x) = slope * x + offset on [-5, 5].
ConstrainedMinimaxProblem affine_constraint(double slope, double offset) {
  auto p = scalar_problem([](double, double) { return 0.0; },
                          [](double, double) { return std::pair{0.0, 0.0}; });
  p.n_c = 1;
  p.c_value = [=](const Vector& x) { return Vector::Constant(1, slope * x(0) + offset); };
  p.jac_c_t_apply = [=](const Vector&, const Vector& v) { return Vector::Constant(1, slope * v(0)); };
  p.prox_p = prox_box(1, -5.0, 5.0);
  p.constants.L_c = std::abs(slope);
  p.constants.L_grad_c = 1.0;  // any upper bound works; keeps the step finite at slope 0
  p.constants.c_hi = 5.0 * std::abs(slope) + std::abs(offset);
  return p;
}

}  // namespace

TEST_SUITE("problems") {

TEST_CASE("registry names and lookup errors") {
  const auto list = list_instances();
  REQUIRE(list.size() == kNames.size());
  for (std::size_t i = 0; i < list.size(); ++i) {
    CHECK(list[i].name == kNames[i]);
    CHECK(registry(kNames[i]).name == kNames[i]);
    CHECK_FALSE(list[i].description.empty());
  }
  CHECK_THROWS_AS(registry("nope"), NotFound);
  try {
    registry("ncc_toy", {{"bogus", 1.0}});
    FAIL("expected InvalidParameter");
  } catch (const InvalidParameter& e) {
    CHECK(std::string(e.what()).find("bogus") != std::string::npos);
  }
  CHECK_THROWS_AS(registry("constrained_toy", {{"radius", 3.0}}), InvalidParameter);
  CHECK_THROWS_AS(registry("quad_saddle_1d", {{"a", -1.0}}), InvalidParameter);
  CHECK_NOTHROW(registry("quad_saddle_box", {{"coupling", 0.5}, {"radius", 3.0}}));
}

TEST_CASE("gradients agree with finite differences") {
  std::mt19937_64 rng(5);
  for (const auto& name : kNames) {
    CAPTURE(name);
    const auto inst = registry(name);
    for (int i = 0; i < 20; ++i) {
      // Stay a margin away from the box boundary.
      const Vector x = sample_box(rng, inst.lo_x * 0.9, inst.hi_x * 0.9);
      const Vector y = sample_box(rng, inst.lo_y * 0.9, inst.hi_y * 0.9);
      const auto rep = finite_diff_check(inst.problem, x, y, 1e-6);
      CHECK(rep.reliable);
      CHECK(rep.max_rel_error <= 1e-5);
    }
  }
}

TEST_CASE("diameters equal the box diagonals") {
  for (const auto& name : kNames) {
    CAPTURE(name);
    const auto inst = registry(name);
    CHECK(*inst.problem.constants.D_x == doctest::Approx((inst.hi_x - inst.lo_x).norm()));
    CHECK(*inst.problem.constants.D_y == doctest::Approx((inst.hi_y - inst.lo_y).norm()));
  }
}

TEST_CASE("sampled difference quotients stay under the declared constants") {
  std::mt19937_64 rng(11);
  for (const auto& name : kNames) {
    CAPTURE(name);
    const auto inst = registry(name);
    const auto& p = inst.problem;
    for (int i = 0; i < 2000; ++i) {
      const Vector x1 = sample_box(rng, inst.lo_x, inst.hi_x), x2 = sample_box(rng, inst.lo_x, inst.hi_x);
      const Vector y1 = sample_box(rng, inst.lo_y, inst.hi_y), y2 = sample_box(rng, inst.lo_y, inst.hi_y);
      const GradPair g1 = p.grad_f(x1, y1), g2 = p.grad_f(x2, y2);
      const double dz = std::sqrt((x1 - x2).squaredNorm() + (y1 - y2).squaredNorm());
      const double dg = std::sqrt((g1.x - g2.x).squaredNorm() + (g1.y - g2.y).squaredNorm());
      CHECK(dg <= inst.L * dz * (1.0 + 1e-12) + 1e-14);
    }
  }
}

TEST_CASE("constrained_toy constants hold on samples") {
  const auto inst = registry("constrained_toy");
  const auto& p = inst.problem;
  const auto& k = p.constants;
  CHECK_NOTHROW(k.validate());
  std::mt19937_64 rng(13);
  for (int i = 0; i < 5000; ++i) {
    const Vector x1 = sample_box(rng, inst.lo_x, inst.hi_x), x2 = sample_box(rng, inst.lo_x, inst.hi_x);
    const Vector y1 = sample_box(rng, inst.lo_y, inst.hi_y), y2 = sample_box(rng, inst.lo_y, inst.hi_y);
    const GradPair g = p.grad_f(x1, y1);
    CHECK(std::sqrt(g.x.squaredNorm() + g.y.squaredNorm()) <= *k.L_F + 1e-12);
    const double F = p.f_value(x1, y1);
    CHECK(F <= *k.F_hi + 1e-12);
    CHECK(F >= *k.F_low - 1e-12);
    const double dx = (x1 - x2).norm();
    CHECK(std::abs(p.c_value(x1)(0) - p.c_value(x2)(0)) <= *k.L_c * dx + 1e-12);
    const double dj = std::abs(p.jac_c_t_apply(x1, vec({1}))(0) - p.jac_c_t_apply(x2, vec({1}))(0));
    CHECK(dj <= *k.L_grad_c * dx + 1e-12);
    const double dz = std::sqrt(dx * dx + (y1 - y2).squaredNorm());
    CHECK(std::abs(p.d_value(x1, y1)(0) - p.d_value(x2, y2)(0)) <= *k.L_d * dz + 1e-12);
    CHECK(p.c_value(x1)(0) <= *k.c_hi + 1e-12);
    CHECK(p.d_value(x1, y1)(0) <= *k.d_hi + 1e-12);
    // Uniform Slater point for d: y = −2.
    CHECK(-p.d_value(x1, vec({-2.0}))(0) >= *k.delta_d - 1e-12);
    // Near-active c has a gradient bounded below.
    if (p.c_value(x1)(0) >= -*k.theta_a)
      CHECK(std::abs(p.jac_c_t_apply(x1, vec({1}))(0)) >= *k.delta_c - 1e-12);
  }
}

TEST_CASE("registered references are KKT points") {
  for (const auto& name : kNames) {
    CAPTURE(name);
    const auto inst = registry(name);
    REQUIRE_FALSE(inst.references.empty());
    for (const auto& ref : inst.references) {
      const Vector lx = ref.lambda_x ? *ref.lambda_x : Vector::Zero(inst.problem.n_c);
      const Vector ly = ref.lambda_y ? *ref.lambda_y : Vector::Zero(inst.problem.n_d);
      CHECK(kkt_residuals(inst.problem, ref.x, ref.y, lx, ly).max() <= 1e-8);
    }
  }
}

TEST_CASE("constrained_toy reference against a grid search and active-set multipliers") {
  // Inner max over the feasible y of (x−1)² + xy − y² is attained at
  // y = clamp(x/2, −2, min(2, 1 − x)); scan x over the feasible interval.
  double best_x = 0.0, best_v = INFINITY;
  for (int i = 0; i <= 2000; ++i) {
    const double x = -1.0 + i * 1e-3;
    const double y = std::clamp(x / 2.0, -2.0, std::min(2.0, 1.0 - x));
    const double v = (x - 1.0) * (x - 1.0) + x * y - y * y;
    if (v < best_v) {
      best_v = v;
      best_x = x;
    }
  }
  const auto ref = registry("constrained_toy").references.front();
  CHECK(std::abs(best_x - ref.x(0)) <= 1e-3);
  CHECK(std::abs(std::clamp(best_x / 2.0, -2.0, 1.0 - best_x) - ref.y(0)) <= 1e-3);

  // Both constraints active at (1, 0): solve x − 2y − λ_y = 0 and
  // 2(x − 1) + y + 2xλ_x − λ_y = 0.
  const double x = 1.0, y = 0.0;
  const double ly = x - 2.0 * y;
  const double lx = (ly - 2.0 * (x - 1.0) - y) / (2.0 * x);
  CHECK((*ref.lambda_x)(0) == doctest::Approx(lx));
  CHECK((*ref.lambda_y)(0) == doctest::Approx(ly));
}

TEST_CASE("near-feasible search") {
  const auto inst = registry("constrained_toy");
  SUBCASE("feasible start is returned unchanged") {
    CHECK(find_near_feasible(inst.problem, 0.1, vec({0.3})) == vec({0.3}));
  }
  SUBCASE("descends from an infeasible corner") {
    const Vector x = find_near_feasible(inst.problem, 0.1, vec({2.0}));
    CHECK(x(0) * x(0) - 1.0 <= 0.1);
    // Bisection for the edge of {x ≥ 1 : x² − 1 ≤ 0.1}; the descent never overshoots x = 1.
    double lo = 1.0, hi = 2.0;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (mid * mid - 1.0 <= 0.1 ? lo : hi) = mid;
    }
    CHECK(x(0) <= lo + 1e-12);
    CHECK(x(0) >= 1.0);
  }
  SUBCASE("affine constraint") {
    const auto p = affine_constraint(2.0, -1.0);
    const Vector x = find_near_feasible(p, 0.05, vec({4.0}));
    CHECK(2.0 * x(0) - 1.0 <= 0.05);
    CHECK(x(0) >= -5.0);
  }
  SUBCASE("unreachable level reports the best point") {
    const auto p = affine_constraint(0.0, 1.0);
    NearFeasibleOptions opts;
    opts.max_iterations = 10;
    try {
      find_near_feasible(p, 0.5, vec({0.0}), opts);
      FAIL("expected FeasibilityNotFound");
    } catch (const FeasibilityNotFound& e) {
      CHECK(e.best_phi() == 1.0);
      CHECK(e.best_x().size() == 1);
    }
  }
  SUBCASE("eta outside (0, 1]") {
    CHECK_THROWS_AS(find_near_feasible(inst.problem, 0.0, vec({0.0})), InvalidParameter);
    CHECK_THROWS_AS(find_near_feasible(inst.problem, 1.5, vec({0.0})), InvalidParameter);
  }
}

}  // TEST_SUITE
