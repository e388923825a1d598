#pragma once

#include <optional>
#include <vector>

#include "frontspeed/flux.hpp"

namespace frontspeed {

struct LinearGrowth {
  double a_bar = 0.0;    // |a(u,s)| <= a_bar |s| + a_tilde
  double a_tilde = 0.0;
};

struct Ellipticity {
  double k1 = 0.0;
  double k2 = 0.0;
};

struct FluxClassification {
  bool regular = false;
  bool a_plus_continuous = false;
  bool a_plus_infinite = false;
  std::optional<LinearGrowth> linear_growth;
  std::optional<Ellipticity> elliptic;
  std::optional<double> over_elliptic;  // k1
  bool ultra_degenerate = false;
  std::vector<Interval> L_td;
  std::optional<double> M_bound;
  int resolution = 0;
};

/// Samples the flux on a resolution x resolution grid (plus far-field
/// gradients) and decides each structural flag. Throws SymmetryViolation.
FluxClassification classify_flux(const FluxModel& m, int resolution = 64);

}  // namespace frontspeed
