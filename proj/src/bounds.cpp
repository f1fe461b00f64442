#include "fal/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fal {

double ceil_plus(double v) {
  if (std::isnan(v) || !(v > 0.0)) return 0.0;
  return std::ceil(v);
}

double safe_log(double v) {
  if (!(v > 0.0)) return -std::numeric_limits<double>::infinity();
  return std::log(v);
}

namespace {

double pos(double v) { return v > 0.0 ? v : 0.0; }

}  // namespace

SccBounds scc_bounds(const SccBoundInputs& in) {
  const double sx = require(in.sigma_x, "sigma_x");
  const double sy = require(in.sigma_y, "sigma_y");
  const double L = require(in.L, "L");
  const double eps = require(in.eps_bar, "eps_bar");
  const double Dx = require(in.D_x, "D_x");
  const double Dy = require(in.D_y, "D_y");
  const double Hs = require(in.H_star, "H_star");
  const double Hl = require(in.H_low, "H_low");
  if (!(sx > 0.0) || !(sy > 0.0) || !(L > 0.0) || !(eps > 0.0))
    throw InvalidParameter("scc bounds need positive moduli, smoothness and tolerance");

  SccBounds b;
  const double a = std::min(1.0, std::sqrt(8.0 * sy / sx));
  const double eta_z = sx / 2.0;
  const double eta_y = std::min(1.0 / (2.0 * sy), 4.0 / (a * sx));
  const double zeta_bar = std::min(sx, sy) / (L * L);
  b.alpha = a;
  b.delta = (2.0 + 1.0 / a) * sx * Dx * Dx + std::max(2.0 * sy, a * sx / 4.0) * Dy * Dy;
  b.theta0 = b.delta + 2.0 / a * (Hs - Hl);

  const double denom_K = std::pow(1.0 / zeta_bar + L, -2.0) * eps * eps;
  const double rate_K = std::max(2.0 / a, a * sx / (4.0 * sy));
  b.K = ceil_plus(rate_K *
                  safe_log(4.0 * std::max(eta_z / (sx * sx), eta_y) * b.theta0 / denom_K));

  const double inner = std::ceil(96.0 * std::sqrt(2.0) * (1.0 + 8.0 * L / sx));
  b.T = std::ceil(48.0 * std::sqrt(2.0) * (1.0 + 8.0 * L / sx)) - 1.0;
  const double denom_N = std::pow(L * L / std::min(sx, sy) + L, -2.0) * eps * eps;
  const double rate_N = std::max(2.0, std::sqrt(sx / (2.0 * sy)));
  const double scale_N =
      std::max(1.0 / (2.0 * sx), std::min(1.0 / (2.0 * sy), 4.0 / (a * sx)));
  b.N = ceil_plus(rate_N * safe_log(4.0 * scale_N * b.theta0 / denom_N)) * (inner + 2.0);
  return b;
}

NccBounds ncc_bounds(const NccBoundInputs& in) {
  const double L = require(in.L, "L");
  const double eps = require(in.eps, "eps");
  const double eh = require(in.eps_hat0, "eps_hat0");
  const double Dx = require(in.D_x, "D_x");
  const double Dy = require(in.D_y, "D_y");
  const double maxH = require(in.max_H_start, "max_H_start");
  const double Hs = require(in.H_star, "H_star");
  const double Hl = require(in.H_low, "H_low");
  if (!(L > 0.0) || !(eps > 0.0) || !(Dy > 0.0))
    throw InvalidParameter("ncc bounds need positive L, eps and D_y");

  NccBounds b;
  const double a = std::min(1.0, std::sqrt(4.0 * eps / (Dy * L)));
  b.alpha = a;
  b.delta = (2.0 + 1.0 / a) * L * Dx * Dx + std::max(eps / Dy, a * L / 4.0) * Dy * Dy;
  const double e2 = eps * eps;
  b.T = ceil_plus(16.0 * (maxH - Hs + eps * Dy / 4.0) * L / e2 +
                  32.0 * eh * eh * (1.0 + 4.0 * Dy * Dy * L * L / e2) / e2 - 1.0);

  const double w = eps / (2.0 * Dy);
  const double Lbar = 3.0 * L + w;
  const double inner = std::ceil(96.0 * std::sqrt(2.0) * (1.0 + (24.0 * L + 4.0 * eps / Dy) / L));
  const double rate = std::max(2.0, std::sqrt(Dy * L / eps));
  const double scale = std::max(1.0 / (2.0 * L), std::min(Dy / eps, 4.0 / (a * L)));
  const double gap = b.delta + 2.0 / a * (Hs - Hl + eps * Dy / 4.0 + L * Dx * Dx);
  const double denom = std::pow(Lbar * Lbar / std::min(L, w) + Lbar, -2.0) * eh * eh;
  const double logterm = pos(safe_log(4.0 * scale * gap / denom));
  b.N = (inner + 2.0) * rate *
        ((b.T + 1.0) * logterm + b.T + 1.0 + 2.0 * b.T * std::log(b.T + 1.0));
  b.max_H_output = maxH + eps * Dy / 4.0 + 2.0 * eh * eh * (1.0 / L + 4.0 * Dy * Dy * L / e2);
  return b;
}

namespace {

struct AlmScalars {
  double eps, eps0, tau, Lambda, ly0;
  double L_F, L_gf, L_c, L_gc, L_d, L_gd, D_x, D_y, c_hi, d_hi, F_hi, F_low, f_low;
};

AlmScalars alm_scalars(const AlmBoundInputs& in) {
  const ProblemConstants& k = in.constants;
  AlmScalars s;
  s.eps = require(in.eps, "eps");
  s.eps0 = require(in.eps0, "eps0");
  s.tau = require(in.tau, "tau");
  s.Lambda = require(in.Lambda, "Lambda");
  s.ly0 = in.norm_lambda_y0;
  s.L_F = require(k.L_F, "L_F");
  s.L_gf = require(k.L_grad_f, "L_grad_f");
  s.L_c = require(k.L_c, "L_c");
  s.L_gc = require(k.L_grad_c, "L_grad_c");
  s.L_d = require(k.L_d, "L_d");
  s.L_gd = require(k.L_grad_d, "L_grad_d");
  s.D_x = require(k.D_x, "D_x");
  s.D_y = require(k.D_y, "D_y");
  s.c_hi = require(k.c_hi, "c_hi");
  s.d_hi = require(k.d_hi, "d_hi");
  s.F_hi = require(k.F_hi, "F_hi");
  s.F_low = require(k.F_low, "F_low");
  s.f_low = require(k.f_star_low, "f_star_low");
  if (!(s.tau > 0.0 && s.tau < 1.0)) throw InvalidParameter("tau must lie in (0, 1)");
  return s;
}

// F_hi − f*_low + D_y ε₀, recurring in several constants.
double dual_gap(const AlmScalars& s) { return s.F_hi - s.f_low + s.D_y * s.eps0; }

}  // namespace

AlmThresholds alm_thresholds(const AlmBoundInputs& in) {
  const double eps = require(in.eps, "eps");
  const double eps0 = require(in.eps0, "eps0");
  const double Lambda = require(in.Lambda, "Lambda");
  const double L_F = require(in.constants.L_F, "L_F");
  const double L_d = require(in.constants.L_d, "L_d");
  const double D_y = require(in.constants.D_y, "D_y");
  const double dc = require(in.constants.delta_c, "delta_c");
  const double dd = require(in.constants.delta_d, "delta_d");

  const double r = 2.0 / dd * (eps0 + L_F) * D_y;
  const double qc = (L_F + 2.0 * L_d / dd * (eps0 + L_F) * D_y + eps0) / dc;
  AlmThresholds t;
  t.feas_c = eps * qc;
  t.comp_c = eps * qc * std::max(qc, Lambda);
  t.feas_d = eps * r;
  t.comp_d = eps * r * std::max(r, in.norm_lambda_y0);
  return t;
}

namespace {

double alm_L(const AlmScalars& s) {
  return s.L_gf + s.L_c * s.L_c + s.c_hi * s.L_gc + s.Lambda * s.L_gc + s.L_d * s.L_d +
         s.d_hi * s.L_gd + s.L_gd * std::sqrt(s.ly0 * s.ly0 + 2.0 * dual_gap(s) / (1.0 - s.tau));
}

bool eps_condition(const AlmBoundInputs& in, const AlmScalars& s, double L) {
  const double ta = require(in.constants.theta_a, "theta_a");
  const double tf = require(in.constants.theta_f, "theta_f");
  const double dd = require(in.constants.delta_d, "delta_d");
  const double g = dual_gap(s);
  const double brace = 2.0 * s.L_F * s.D_y + 2.0 * s.F_hi - 2.0 * s.f_low + 2.0 * s.Lambda +
                       1.0 / s.tau + s.ly0 * s.ly0 + 2.0 * g / (1.0 - s.tau) +
                       s.eps0 * s.D_y / 2.0 + 1.0 / (s.L_c * s.L_c) + 4.0 * s.D_y * s.D_y * L +
                       s.Lambda * s.Lambda;
  const double rhs = std::max({1.0, s.Lambda / ta, brace / (tf * tf),
                               4.0 * s.ly0 * s.ly0 / (dd * dd * s.tau) +
                                   8.0 * g / (dd * dd * s.tau * (1.0 - s.tau))});
  return 1.0 / s.eps >= rhs;
}

}  // namespace

bool check_eps_condition(const AlmBoundInputs& in) {
  const AlmScalars s = alm_scalars(in);
  return eps_condition(in, s, alm_L(s));
}

AlmBounds alm_bounds(const AlmBoundInputs& in) {
  const AlmScalars s = alm_scalars(in);
  AlmBounds b;
  const double g = dual_gap(s);
  const double Dy = s.D_y;
  const double Dx = s.D_x;

  b.L = alm_L(s);
  const double L = b.L;
  b.alpha = std::min(1.0, std::sqrt(4.0 / (Dy * L)));
  b.delta = (2.0 + 1.0 / b.alpha) * L * Dx * Dx + std::max(1.0 / Dy, L / 4.0) * Dy * Dy;

  b.K = static_cast<std::int64_t>(
      ceil_plus((std::log(s.eps) - std::log(s.eps0)) / std::log(s.tau)));
  b.rho_literal = in.rho_literal ? *in.rho_literal
                                 : 1.0 / (s.eps0 * std::pow(s.tau, static_cast<double>(b.K)));

  const double Lc2 = s.L_c * s.L_c;
  const double w = 1.0 / (2.0 * Dy);
  const double bracket = std::pow(3.0 * L + w, 2.0) / std::min(Lc2, w) + 3.0 * L + w;
  const double lead = 16.0 * std::max(1.0 / (2.0 * Lc2), 4.0 / (b.alpha * Lc2)) * bracket * bracket;
  auto M_with = [&](double dhi_coeff) {
    const double inner = s.F_hi - s.F_low + s.Lambda * s.Lambda / 2.0 +
                         1.5 * s.ly0 * s.ly0 + 3.0 * g / (1.0 - s.tau) +
                         dhi_coeff * s.d_hi * s.d_hi + Dy / 4.0 + L * Dx * Dx;
    return lead * (b.delta + 2.0 / b.alpha * inner);
  };
  b.M = M_with(1.0);
  b.M_literal = M_with(b.rho_literal);

  b.T = ceil_plus(16.0 *
                      (s.L_F * Dy + s.F_hi - s.f_low + s.Lambda +
                       0.5 * (1.0 / s.tau + s.ly0 * s.ly0) + g / (1.0 - s.tau) +
                       s.Lambda * s.Lambda / 2.0 + Dy / 4.0) *
                      L +
                  8.0 * (1.0 + 4.0 * Dy * Dy * L * L));

  const double inner_it = std::ceil(96.0 * std::sqrt(2.0) * (1.0 + (24.0 * L + 4.0 / Dy) / Lc2));
  const double Kd = static_cast<double>(b.K);
  b.N = (inner_it + 2.0) * std::max(2.0, std::sqrt(Dy * L)) * b.T /
        (1.0 - std::pow(s.tau, 4.0)) * std::pow(s.tau * s.eps, -4.0) *
        (28.0 * Kd * std::log(1.0 / s.tau) + 28.0 * std::log(1.0 / s.eps0) +
         2.0 * pos(safe_log(b.M)) + 2.0 + 2.0 * std::log(2.0 * b.T));

  b.r = 2.0 / require(in.constants.delta_d, "delta_d") * (s.eps0 + s.L_F) * Dy;
  b.thresholds = alm_thresholds(in);
  b.eps_condition = eps_condition(in, s, L);
  return b;
}

}  // namespace fal
