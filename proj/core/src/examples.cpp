#include "frontspeed/examples.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "frontspeed/errors.hpp"

namespace frontspeed {

DegenerateFamilySpec default_family_spec() { return DegenerateFamilySpec{}; }

namespace {

std::vector<double> power_coeffs(int n, double c) {
  std::vector<double> out(static_cast<std::size_t>(n) + 1, 0.0);
  out.back() = c;
  return out;
}

int family_power(const DegenerateFamilySpec& spec) { return spec.c2_smooth ? 3 : 2; }

void spec_fail(const std::string& what) { throw Error(ErrorCode::spec_violation, what); }

}  // namespace

void validate_family_spec(const DegenerateFamilySpec& s, bool need_bump) {
  if (!(s.u2 > 0.0 && s.u2 < s.u1 && s.u1 < 1.0)) spec_fail("need 0 < u2 < u1 < 1");
  if (!(s.c1 > 0.0) || !(s.c2 > 0.0)) spec_fail("D1 and D2 must be strictly convex (c1, c2 > 0)");
  if (!(s.k > 0.0)) spec_fail("reaction rate k must be positive");
  if (!(s.lambda >= 0.0)) spec_fail("lambda must be nonnegative");
  if (s.phi_p > 0.0 && s.phi_p < 1.0) spec_fail("ratio limiter exponent must be >= 1");
  if (need_bump && !(s.delta > 0.0 && s.delta < s.u2 && s.u1 < s.kappa && s.kappa < 1.0)) {
    spec_fail("bump support must satisfy 0 < delta < u2 < u1 < kappa < 1");
  }
}

PiecewisePolynomial family_d1(const DegenerateFamilySpec& s) {
  const int n = family_power(s);
  PiecewisePolynomial::Piece zero{0.0, s.u1, {}};
  PiecewisePolynomial::Piece rise{s.u1, 1.0, {{s.u1, power_coeffs(n, s.c1)}}};
  return PiecewisePolynomial({zero, rise});
}

PiecewisePolynomial family_d2(const DegenerateFamilySpec& s) {
  const int n = family_power(s);
  // (u2 - u)^n = (-1)^n (u - u2)^n
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  PiecewisePolynomial::Piece fall{0.0, s.u2, {{s.u2, power_coeffs(n, sign * s.c2)}}};
  PiecewisePolynomial::Piece zero{s.u2, 1.0, {}};
  return PiecewisePolynomial({fall, zero});
}

PiecewisePolynomial family_bump(const DegenerateFamilySpec& s) {
  const double mid = 0.5 * (s.delta + s.kappa);
  const double h = 0.5 * (s.kappa - s.delta);
  const double h2 = h * h;
  // ((u - delta)(kappa - u))^3 / h^6 = (1 - x^2/h^2)^3 with x = u - mid
  std::vector<double> coeffs = {1.0, 0.0, -3.0 / h2, 0.0, 3.0 / (h2 * h2), 0.0, -1.0 / (h2 * h2 * h2)};
  PiecewisePolynomial::Piece left{0.0, s.delta, {}};
  PiecewisePolynomial::Piece bump{s.delta, s.kappa, {{mid, coeffs}}};
  PiecewisePolynomial::Piece right{s.kappa, 1.0, {}};
  return PiecewisePolynomial({left, bump, right});
}

Limiter family_limiter(const DegenerateFamilySpec& s) {
  return s.phi_p > 0.0 ? Limiter::ratio(s.phi_p) : Limiter::arctangent();
}

ExampleModel make_example(int n, const DegenerateFamilySpec& spec) {
  validate_family_spec(spec, false);
  PiecewisePolynomial D;
  switch (n) {
    case 1: D = family_d1(spec); break;
    case 2: D = family_d2(spec); break;
    case 3: D = family_d1(spec) + family_d2(spec); break;
    default: spec_fail("example number must be 1, 2 or 3");
  }
  return {FluxModel::separable(D, family_limiter(spec), FluxKind::piecewise, "example" + std::to_string(n)),
          ReactionModel::logistic(spec.k)};
}

ExampleModel make_example4(const DegenerateFamilySpec& spec) {
  validate_family_spec(spec, true);
  auto D = family_d1(spec) + family_d2(spec);
  if (spec.lambda > 0.0) D = D + family_bump(spec).scaled(spec.lambda);
  std::ostringstream label;
  label << "example4(lambda=" << spec.lambda << ")";
  return {FluxModel::separable(D, family_limiter(spec), FluxKind::piecewise, label.str()),
          ReactionModel::logistic(spec.k)};
}

LevelSample stall_levels(const ExampleModel& family, double sigma, const IntegrationOptions& opts) {
  const auto sol = integrate_halfplane(family.flux, family.reaction, sigma, SolveMode::classic, opts);
  LevelSample s;
  s.sigma = sigma;
  s.alpha = sol.alpha.value_or(0.0);
  s.beta = (sigma > 0.0) ? s.alpha - sol.V0 / sigma : -kInfinity;
  return s;
}

CharacteristicValues characteristic_values(const ExampleModel& family, const DegenerateFamilySpec& spec,
                                           const std::vector<double>& probe_sigmas,
                                           const IntegrationOptions& opts) {
  const auto d1 = family_d1(spec);
  auto below_tau = [&](double sigma) {
    const auto s = stall_levels(family, sigma, opts);
    return s.alpha > spec.u1 && sigma < d1.derivative(s.alpha);
  };
  CharacteristicValues cv;
  double lo = 1e-3, hi = 1.0;
  if (!below_tau(lo)) throw Error(ErrorCode::root_not_bracketed, "sigma = D1'(alpha) not bracketed from below");
  while (below_tau(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e4) throw Error(ErrorCode::root_not_bracketed, "tau not bracketed below 1e4");
  }
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (below_tau(mid)) lo = mid; else hi = mid;
  }
  cv.tau = lo;

  // beta is continuous on (0, tau]; solve beta = u2 by bisection on the sign
  auto beta_minus_u2 = [&](double sigma) { return stall_levels(family, sigma, opts).beta - spec.u2; };
  double a = 1e-3, b = cv.tau;
  double fa = beta_minus_u2(a), fb = beta_minus_u2(b);
  if (fa * fb > 0.0) throw Error(ErrorCode::root_not_bracketed, "beta_sigma = u2 not bracketed on (0, tau]");
  while (b - a > 1e-10) {
    const double mid = 0.5 * (a + b);
    const double fm = beta_minus_u2(mid);
    if ((fm > 0.0) == (fa > 0.0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  cv.sigma_tilde = 0.5 * (a + b);
  for (double s : probe_sigmas) cv.samples.push_back(stall_levels(family, s, opts));
  return cv;
}

std::optional<SaturatedLine> saturated_line(const SpeedSolution& sol) {
  std::optional<SaturatedLine> best;
  for (const auto& span : sol.saturated_spans) {
    const double mid = 0.5 * (span.lo + span.hi);
    const double V = sol.V_at(mid);
    if (V <= 0.0) continue;
    if (!best || span.width() > best->alpha - best->gamma) {
      best = SaturatedLine{span.lo, span.hi, V - sol.sigma * mid};
    }
  }
  return best;
}

}  // namespace frontspeed
