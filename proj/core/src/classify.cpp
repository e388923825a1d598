#include "frontspeed/classify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "frontspeed/errors.hpp"

namespace frontspeed {

namespace {

// far-field gradients used to judge asymptotic growth
constexpr double kFarNear = 1e6;
constexpr double kFarFar = 1e8;

double max_saturation_jump(const FluxModel& m, int n) {
  double worst = 0.0;
  double prev = m.a_plus(0.0);
  for (int i = 1; i <= n; ++i) {
    const double cur = m.a_plus(static_cast<double>(i) / n);
    if (std::isfinite(prev) && std::isfinite(cur)) worst = std::max(worst, std::abs(cur - prev));
    prev = cur;
  }
  return worst;
}

}  // namespace

FluxClassification classify_flux(const FluxModel& m, int resolution) {
  if (resolution < 64) throw Error(ErrorCode::invalid_argument, "classification needs >= 64 samples per axis");
  FluxClassification c;
  c.resolution = resolution;
  c.L_td = m.degenerate_levels();
  c.ultra_degenerate = !c.L_td.empty();

  std::vector<double> s_grid;
  for (int j = 0; j < resolution; ++j) {
    s_grid.push_back(1e-4 * std::pow(1e8, static_cast<double>(j) / (resolution - 1)));
  }

  bool positive_slope = true;
  bool any_finite_omega = false;
  bool all_infinite_aplus = true;
  bool tails_linear = true;     // a/s does not decay at infinity
  bool tails_sublinear = true;  // a/s does not grow at infinity
  bool slope_tail_bounded = true;
  double k1 = kInfinity, k2 = 0.0, a_bar = 0.0, a_tilde = 0.0, M = 0.0;

  for (int i = 0; i < resolution; ++i) {
    const double u = static_cast<double>(i) / (resolution - 1);
    const double omega = m.omega_plus(u);
    const double aplus = m.a_plus(u);
    if (std::isfinite(omega)) any_finite_omega = true;
    if (std::isfinite(aplus)) all_infinite_aplus = false;
    const double d0 = m.da_ds(u, 0.0);
    if (!(d0 > 0.0)) positive_slope = false;
    M = std::max(M, d0);
    for (double s0 : s_grid) {
      const double s = std::isfinite(omega) ? std::min(s0, omega * (1.0 - 1e-9)) : s0;
      const double a = m.impl().value(u, s);
      const double am = m.impl().value(u, -s);
      if (std::abs(a + am) > 1e-12 * (1.0 + std::abs(a))) {
        std::ostringstream os;
        os << "a(u,s) + a(u,-s) = " << a + am << " at u=" << u << ", s=" << s;
        throw Error(ErrorCode::symmetry_violation, os.str());
      }
      const double slope = m.da_ds(u, s);
      if (!(slope > 0.0)) positive_slope = false;
      M = std::max(M, slope);
      k1 = std::min(k1, a / s);
      k2 = std::max(k2, a / s);
      if (s >= 1.0) a_bar = std::max(a_bar, a / s);
    }
    if (!std::isfinite(omega)) {
      a_tilde = std::max(a_tilde, m.impl().value(u, 1.0));
      const double r_near = m.impl().value(u, kFarNear) / kFarNear;
      const double r_far = m.impl().value(u, kFarFar) / kFarFar;
      if (r_far < 0.5 * r_near) tails_linear = false;
      if (r_far > 2.0 * r_near) tails_sublinear = false;
      k1 = std::min(k1, r_far);
      k2 = std::max(k2, r_far);
      a_bar = std::max(a_bar, r_far);
      const double slope_far = m.da_ds(u, kFarFar);
      if (slope_far > 2.0 * std::max(m.da_ds(u, kFarNear), 1e-300)) slope_tail_bounded = false;
      M = std::max(M, slope_far);
    }
  }

  c.regular = positive_slope && !c.ultra_degenerate;
  c.a_plus_infinite = all_infinite_aplus;
  if (all_infinite_aplus) {
    c.a_plus_continuous = true;
  } else {
    // jumps of a_plus must shrink under refinement
    const double coarse = max_saturation_jump(m, resolution);
    const double fine = max_saturation_jump(m, 2 * resolution);
    c.a_plus_continuous = fine <= 0.75 * coarse || fine < 1e-9;
  }
  if (all_infinite_aplus && k1 > 0.0 && (any_finite_omega || tails_linear)) {
    c.over_elliptic = k1;
    if (!any_finite_omega && tails_sublinear && std::isfinite(k2)) c.elliptic = Ellipticity{k1, k2};
  }
  if (!any_finite_omega && tails_sublinear) c.linear_growth = LinearGrowth{a_bar, a_tilde};
  if (!any_finite_omega && slope_tail_bounded) c.M_bound = M;
  return c;
}

}  // namespace frontspeed
