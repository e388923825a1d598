#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "frontspeed/model.hpp"

namespace frontspeed {

enum class SolveMode { classic, extended };

std::string to_string(SolveMode mode);

struct IntegrationOptions {
  double rtol = 1e-10;
  double atol = 1e-14;
  double h_min = 1e-13;
  double h_max = 1e-2;
  double delta0 = 1e-6;     // series start offset below u = 1
  double u_min = 1e-6;      // terminal level standing in for u = 0
  double event_tol = 1e-12;
  std::size_t max_steps = 2'000'000;
};

/// Backward solution of R' = Phi_e(u, R; sigma) from u = 1. Nodes are
/// stored with u decreasing; R between nodes is the cubic Hermite
/// interpolant of (R, dR/du).
struct SpeedSolution {
  double sigma = 0.0;
  SolveMode mode = SolveMode::extended;
  std::vector<double> u;
  std::vector<double> R;
  std::vector<double> dR;
  std::vector<double> V;
  std::optional<double> alpha;  // classic mode only; 0 when the terminal level is reached
  bool reached_terminal = false;
  double u_end = 1.0;
  double V0 = 0.0;              // V at u_end
  std::vector<Interval> saturated_spans;  // V >= a_plus, or totally degenerate levels
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;

  double R_at(double level) const;
  double V_at(double level) const;
  /// dV/du from the interpolant; sigma on saturated spans.
  double dV_at(double level) const;
  bool in_saturated_span(double level) const;
};

/// Right-hand side of the extended problem.
double phi_extended(const FluxModel& m, const ReactionModel& r, double u, double R, double sigma);

/// Starting slope of V ~ m (1 - u) from the linearization at u = 1.
double series_start_slope(const FluxModel& m, const ReactionModel& r, double sigma);

SpeedSolution integrate_halfplane(const FluxModel& m, const ReactionModel& r, double sigma,
                                  SolveMode mode, const IntegrationOptions& opts = {});

/// Same problem started from R(start) = rho^2 instead of the series start;
/// used to cross-check the linearization.
SpeedSolution integrate_halfplane_from(const FluxModel& m, const ReactionModel& r, double sigma,
                                       SolveMode mode, double start, double rho,
                                       const IntegrationOptions& opts = {});

struct SlopeEstimate {
  double w = 0.0;
  double error = 0.0;
  std::size_t samples = 0;
};

/// Limit of V(u)/u at 0 from the nodes in [1e-4, 1e-3]; nullopt when V
/// does not vanish at the terminal level. Throws InsufficientResolution.
std::optional<SlopeEstimate> slope_at_zero(const SpeedSolution& sol);

/// True when V at the terminal level is below sigma/2 * u_end, the midpoint
/// of the two admissible slopes at 0.
bool vanishes_at_zero(const SpeedSolution& sol);

struct OrderingReport {
  double max_violation = 0.0;  // max of V_high - V_low over the common grid
  double worst_level = 0.0;
  bool alpha_ordered = true;
  std::size_t points = 0;
  bool pass = true;
};

/// Checks V_low >= V_high where low.sigma <= high.sigma.
OrderingReport compare_speed_solutions(const SpeedSolution& low, const SpeedSolution& high,
                                       double tol = 1e-9);

}  // namespace frontspeed
