#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "fal/core.hpp"
#include "fal/prox.hpp"

namespace fal::testing {

inline Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double e : v) out(i++) = e;
  return out;
}

inline Vector scalar(double v) { return Vector::Constant(1, v); }

inline Vector random_vector(std::mt19937_64& rng, Index n, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = d(rng);
  return v;
}

// Unconstrained 1x1 problem from a scalar smooth part and its gradient.
template <class F, class G>
ConstrainedMinimaxProblem scalar_problem(F f, G g) {
  ConstrainedMinimaxProblem p;
  p.n = 1;
  p.m = 1;
  p.f_value = [f](const Vector& x, const Vector& y) { return f(x(0), y(0)); };
  p.grad_f = [g](const Vector& x, const Vector& y) {
    auto [gx, gy] = g(x(0), y(0));
    return GradPair{Vector::Constant(1, gx), Vector::Constant(1, gy)};
  };
  p.prox_p = prox_zero();
  p.prox_q = prox_zero();
  return p;
}

// Problem with constant-valued constraint blocks; used to test AL algebra.
inline ConstrainedMinimaxProblem constant_blocks(double F, Vector c, Vector d) {
  ConstrainedMinimaxProblem p;
  p.n = 1;
  p.m = 1;
  p.n_c = c.size();
  p.n_d = d.size();
  p.f_value = [F](const Vector&, const Vector&) { return F; };
  p.grad_f = [](const Vector&, const Vector&) {
    return GradPair{Vector::Zero(1), Vector::Zero(1)};
  };
  p.c_value = [c](const Vector&) { return c; };
  p.jac_c_t_apply = [](const Vector&, const Vector&) { return Vector::Zero(1); };
  p.d_value = [d](const Vector&, const Vector&) { return d; };
  p.jac_d_t_apply = [](const Vector&, const Vector&, const Vector&) {
    return GradPair{Vector::Zero(1), Vector::Zero(1)};
  };
  p.prox_p = prox_zero();
  p.prox_q = prox_zero();
  return p;
}

namespace oracle {

// Projection onto {u >= 0, ‖u‖ <= radius} by enumerating every set of
// coordinates pinned at zero together with the state of the ball constraint
// and keeping the nearest feasible candidate.
inline Vector project_nonneg_ball_brute(const Vector& v, double radius) {
  const Index n = v.size();
  Vector best = Vector::Zero(n);
  double best_d = (v - best).squaredNorm();
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    Vector u = Vector::Zero(n);
    for (Index i = 0; i < n; ++i)
      if (mask & (1u << i)) u(i) = v(i);
    for (int ball = 0; ball < 2; ++ball) {
      Vector cand = u;
      if (ball == 1) {
        const double nu = u.norm();
        if (nu == 0.0) continue;
        cand = u * (radius / nu);
      }
      if ((cand.array() < -1e-15).any()) continue;
      if (cand.norm() > radius * (1.0 + 1e-14)) continue;
      const double d = (v - cand).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = cand;
      }
    }
  }
  return best;
}

// Projected-gradient residual of a 1x1 saddle problem on a box:
// ‖(x − clamp(x − g_x), y − clamp(y + g_y))‖.
template <class G>
double box_stationarity(G grad, double x, double y, double lo, double hi) {
  auto [gx, gy] = grad(x, y);
  const double rx = x - std::clamp(x - gx, lo, hi);
  const double ry = y - std::clamp(y + gy, lo, hi);
  return std::hypot(rx, ry);
}

struct GridPoint {
  double x;
  double y;
};

// Grid points (step h over [lo, hi]²) whose box-stationarity residual is at
// most `tol`, merged into clusters of diameter below `merge`.
template <class G>
std::vector<GridPoint> stationary_clusters(G grad, double lo, double hi, double h, double tol,
                                           double merge) {
  std::vector<GridPoint> out;
  const int n = static_cast<int>(std::lround((hi - lo) / h));
  for (int i = 0; i <= n; ++i) {
    const double x = lo + i * h;
    for (int j = 0; j <= n; ++j) {
      const double y = lo + j * h;
      if (box_stationarity(grad, x, y, lo, hi) > tol) continue;
      bool merged = false;
      for (std::size_t c = 0; c < out.size(); ++c) {
        if (std::hypot(out[c].x - x, out[c].y - y) < merge) {
          merged = true;
          break;
        }
      }
      if (!merged) out.push_back({x, y});
    }
  }
  return out;
}

}  // namespace oracle

}  // namespace fal::testing
