#include "fal/core.hpp"

#include <algorithm>
#include <cmath>

#include "fal/prox.hpp"

namespace fal {

namespace {

void check_nonneg(const std::optional<double>& v, std::string_view name) {
  if (v && !(*v >= 0.0)) throw InvalidParameter(std::string(name) + " must be nonnegative");
}

void check_positive(const std::optional<double>& v, std::string_view name) {
  if (v && !(*v > 0.0)) throw InvalidParameter(std::string(name) + " must be positive");
}

// Stencil points leaving the domain get moved by a tiny-step prox.
bool in_domain(const ProxOracle& prox, const Vector& v, double h) {
  if (!prox) return true;
  const Vector moved = prox(1e-12, v);
  return (moved - v).norm() <= 1e-3 * h;
}

}  // namespace

void ProblemConstants::validate() const {
  check_nonneg(L_F, "L_F");
  check_nonneg(L_grad_f, "L_grad_f");
  check_nonneg(L_c, "L_c");
  check_nonneg(L_grad_c, "L_grad_c");
  check_nonneg(L_d, "L_d");
  check_nonneg(L_grad_d, "L_grad_d");
  check_nonneg(D_x, "D_x");
  check_nonneg(D_y, "D_y");
  check_nonneg(c_hi, "c_hi");
  check_nonneg(d_hi, "d_hi");
  check_positive(delta_c, "delta_c");
  check_positive(theta_a, "theta_a");
  check_positive(theta_f, "theta_f");
  check_positive(delta_d, "delta_d");
  if (F_low && F_hi && *F_low > *F_hi) throw InvalidParameter("F_low must not exceed F_hi");
  if (f_star_low && F_hi && *f_star_low > *F_hi)
    throw InvalidParameter("f_star_low must not exceed F_hi");
}

double require(const std::optional<double>& value, std::string_view symbol) {
  if (!value || !std::isfinite(*value)) throw MissingConstant(std::string(symbol));
  return *value;
}

Vector ConstrainedMinimaxProblem::eval_c(const Vector& x) const {
  if (n_c == 0 || !c_value) return Vector(0);
  return c_value(x);
}

Vector ConstrainedMinimaxProblem::eval_d(const Vector& x, const Vector& y) const {
  if (n_d == 0 || !d_value) return Vector(0);
  return d_value(x, y);
}

void grad_f_to(const ConstrainedMinimaxProblem& prob, const Vector& x, const Vector& y,
               GradPair& out) {
  if (prob.grad_f_into) prob.grad_f_into(x, y, out);
  else out = prob.grad_f(x, y);
}

void c_value_to(const ConstrainedMinimaxProblem& prob, const Vector& x, Vector& out) {
  if (prob.c_value_into) prob.c_value_into(x, out);
  else out = prob.c_value(x);
}

void jac_c_t_apply_to(const ConstrainedMinimaxProblem& prob, const Vector& x, const Vector& v,
                      Vector& out) {
  if (prob.jac_c_t_apply_into) prob.jac_c_t_apply_into(x, v, out);
  else out = prob.jac_c_t_apply(x, v);
}

void d_value_to(const ConstrainedMinimaxProblem& prob, const Vector& x, const Vector& y,
                Vector& out) {
  if (prob.d_value_into) prob.d_value_into(x, y, out);
  else out = prob.d_value(x, y);
}

void jac_d_t_apply_to(const ConstrainedMinimaxProblem& prob, const Vector& x, const Vector& y,
                      const Vector& v, GradPair& out) {
  if (prob.jac_d_t_apply_into) prob.jac_d_t_apply_into(x, y, v, out);
  else out = prob.jac_d_t_apply(x, y, v);
}

ConstrainedMinimaxProblem instrument(const ConstrainedMinimaxProblem& prob,
                                     OracleCounters& counters) {
  ConstrainedMinimaxProblem out = prob;
  OracleCounters* ctr = &counters;
  if (prob.grad_f) {
    out.grad_f = [g = prob.grad_f, ctr](const Vector& x, const Vector& y) {
      ++ctr->n_grad_f;
      return g(x, y);
    };
  }
  if (prob.jac_c_t_apply) {
    out.jac_c_t_apply = [g = prob.jac_c_t_apply, ctr](const Vector& x, const Vector& v) {
      ++ctr->n_grad_c;
      return g(x, v);
    };
  }
  if (prob.jac_d_t_apply) {
    out.jac_d_t_apply = [g = prob.jac_d_t_apply, ctr](const Vector& x, const Vector& y,
                                                      const Vector& v) {
      ++ctr->n_grad_d;
      return g(x, y, v);
    };
  }
  if (prob.grad_f_into) {
    out.grad_f_into = [g = prob.grad_f_into, ctr](const Vector& x, const Vector& y, GradPair& o) {
      ++ctr->n_grad_f;
      g(x, y, o);
    };
  }
  if (prob.jac_c_t_apply_into) {
    out.jac_c_t_apply_into = [g = prob.jac_c_t_apply_into, ctr](const Vector& x, const Vector& v,
                                                                Vector& o) {
      ++ctr->n_grad_c;
      g(x, v, o);
    };
  }
  if (prob.jac_d_t_apply_into) {
    out.jac_d_t_apply_into = [g = prob.jac_d_t_apply_into, ctr](const Vector& x, const Vector& y,
                                                                const Vector& v, GradPair& o) {
      ++ctr->n_grad_d;
      g(x, y, v, o);
    };
  }
  if (prob.prox_p) {
    out.prox_p = [g = prob.prox_p, ctr](double gamma, const Vector& v) {
      ++ctr->n_prox_p;
      return g(gamma, v);
    };
  }
  if (prob.prox_q) {
    out.prox_q = [g = prob.prox_q, ctr](double gamma, const Vector& v) {
      ++ctr->n_prox_q;
      return g(gamma, v);
    };
  }
  return out;
}

ObjectiveValue eval_objective(const ConstrainedMinimaxProblem& prob, const Vector& x,
                              const Vector& y) {
  ObjectiveValue out;
  out.value = prob.f_value(x, y);
  out.includes_nonsmooth = static_cast<bool>(prob.p_value) && static_cast<bool>(prob.q_value);
  if (out.includes_nonsmooth) out.value += prob.p_value(x) - prob.q_value(y);
  check_finite(out.value, "objective");
  return out;
}

double eval_al_x(const ConstrainedMinimaxProblem& prob, const Vector& x, const Vector& y,
                 const Vector& lambda_x, double rho) {
  if (!(rho > 0.0)) throw InvalidParameter("rho must be positive");
  double value = eval_objective(prob, x, y).value;
  if (prob.n_c > 0) {
    const Vector shifted = positive_part(lambda_x + rho * prob.eval_c(x));
    value += (shifted.squaredNorm() - lambda_x.squaredNorm()) / (2.0 * rho);
  }
  check_finite(value, "augmented Lagrangian");
  return value;
}

double eval_al(const ConstrainedMinimaxProblem& prob, const Vector& x, const Vector& y,
               const Vector& lambda_x, const Vector& lambda_y, double rho) {
  double value = eval_al_x(prob, x, y, lambda_x, rho);
  if (prob.n_d > 0) {
    const Vector shifted = positive_part(lambda_y + rho * prob.eval_d(x, y));
    value -= (shifted.squaredNorm() - lambda_y.squaredNorm()) / (2.0 * rho);
  }
  check_finite(value, "augmented Lagrangian");
  return value;
}

FiniteDiffReport finite_diff_check(const ConstrainedMinimaxProblem& prob, const Vector& x,
                                   const Vector& y, double h) {
  if (!(h > 0.0)) throw InvalidParameter("finite-difference step must be positive");
  const GradPair g = prob.grad_f(x, y);
  check_finite(g.x, "grad_f x-block");
  check_finite(g.y, "grad_f y-block");

  FiniteDiffReport report;
  auto relerr = [](double fd, double exact) {
    return std::abs(fd - exact) / std::max(1.0, std::abs(exact));
  };
  for (Index i = 0; i < x.size(); ++i) {
    Vector xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    if (!in_domain(prob.prox_p, xp, h) || !in_domain(prob.prox_p, xm, h)) report.reliable = false;
    const double fd = (prob.f_value(xp, y) - prob.f_value(xm, y)) / (2.0 * h);
    report.max_rel_error = std::max(report.max_rel_error, relerr(fd, g.x(i)));
  }
  for (Index j = 0; j < y.size(); ++j) {
    Vector yp = y, ym = y;
    yp(j) += h;
    ym(j) -= h;
    if (!in_domain(prob.prox_q, yp, h) || !in_domain(prob.prox_q, ym, h)) report.reliable = false;
    const double fd = (prob.f_value(x, yp) - prob.f_value(x, ym)) / (2.0 * h);
    report.max_rel_error = std::max(report.max_rel_error, relerr(fd, g.y(j)));
  }
  return report;
}

void check_finite(const Vector& v, std::string_view what) {
  if (!v.allFinite()) throw NumericalFailure("non-finite value in " + std::string(what));
}

void check_finite(double v, std::string_view what) {
  if (!std::isfinite(v)) throw NumericalFailure("non-finite value in " + std::string(what));
}

}  // namespace fal
