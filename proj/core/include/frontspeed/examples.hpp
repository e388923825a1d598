#pragma once

#include <optional>
#include <vector>

#include "frontspeed/halfplane.hpp"
#include "frontspeed/model.hpp"

namespace frontspeed {

/// Parameters of the ultra-degenerate toy families:
///   D2 = c2 (u2 - u)^n on [0, u2), 0 on [u2, u1], D1 = c1 (u - u1)^n on (u1, 1]
/// with n = 2 (C1 junctions) or n = 3 (C2 junctions), a(u,s) = D(u) phi(s),
/// f(u) = k u (1 - u), plus the bump lambda ((u - delta)(kappa - u))^3
/// normalized to unit height.
struct DegenerateFamilySpec {
  double u1 = 0.6;
  double u2 = 0.3;
  double c1 = 40.0;
  double c2 = 0.2;
  double k = 1.0;
  bool c2_smooth = false;
  double phi_p = 2.0;  // ratio limiter exponent; <= 0 selects atan
  double lambda = 0.01;
  double delta = 0.15;
  double kappa = 0.65;
};

/// Bump weights on either side of the threshold where the bump first pokes
/// above the sigma_s solution of Example 3 (between 0.1 and 0.2 for the
/// default spec).
inline constexpr double kSmallLambda = 0.01;
inline constexpr double kLargeLambda = 1.0;

DegenerateFamilySpec default_family_spec();

struct ExampleModel {
  FluxModel flux;
  ReactionModel reaction;
};

PiecewisePolynomial family_d1(const DegenerateFamilySpec& spec);
PiecewisePolynomial family_d2(const DegenerateFamilySpec& spec);
/// Unit-height bump supported on [delta, kappa].
PiecewisePolynomial family_bump(const DegenerateFamilySpec& spec);
Limiter family_limiter(const DegenerateFamilySpec& spec);

/// Example n in {1, 2, 3}. Throws SpecViolation.
ExampleModel make_example(int n, const DegenerateFamilySpec& spec);
/// Example 3 diffusion plus lambda times the bump. Throws SpecViolation.
ExampleModel make_example4(const DegenerateFamilySpec& spec);

void validate_family_spec(const DegenerateFamilySpec& spec, bool need_bump);

struct LevelSample {
  double sigma = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
};

struct CharacteristicValues {
  double tau = 0.0;
  double sigma_tilde = 0.0;
  std::vector<LevelSample> samples;
};

/// Stall level alpha_sigma of the classic solution and
/// beta_sigma = alpha_sigma - V(alpha_sigma) / sigma.
LevelSample stall_levels(const ExampleModel& family, double sigma, const IntegrationOptions& opts = {});

/// tau solves sigma = D1'(alpha_sigma); sigma_tilde solves beta_sigma = u2.
/// `family` is Example 1 or 3. Throws RootNotBracketed.
CharacteristicValues characteristic_values(const ExampleModel& family, const DegenerateFamilySpec& spec,
                                           const std::vector<double>& probe_sigmas = {},
                                           const IntegrationOptions& opts = {});

/// Geometry of the extended solution at sigma for the Example 4 flux: the
/// line V = sigma u + c on the saturated span [gamma, alpha].
struct SaturatedLine {
  double gamma = 0.0;
  double alpha = 0.0;
  double c = 0.0;
};

std::optional<SaturatedLine> saturated_line(const SpeedSolution& sol);

}  // namespace frontspeed
