#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "frontspeed/model.hpp"

namespace frontspeed {

enum class InitialShape { step, bump, constant };

/// u_t = (a(u,u_x))_x + f(u) on [-L, L], zero-flux ends, explicit Euler in
/// time with face fluxes a((u_i+u_{i+1})/2, (u_{i+1}-u_i)/h).
struct SimGrid {
  double h = 0.05;
  double L = 200.0;
  double dt = 0.0;       // 0 picks 0.9 of the stability bound
  double T = 60.0;
  double output_dt = 0.1;
  InitialShape shape = InitialShape::step;
  double x0 = -100.0;    // step: u = 1 left of x0; bump: centre
  double width = 10.0;   // bump half-width
  double level = 0.5;    // constant state
};

inline constexpr std::array<double, 3> kFrontLevels = {0.1, 0.5, 0.9};

struct Trajectory {
  std::vector<double> t;
  std::array<std::vector<double>, 3> x;       // rightmost crossing of each level
  std::array<std::vector<double>, 3> x_left;  // leftmost crossing (bump runs)
  double dt = 0.0;
  double dt_limit = 0.0;
  std::size_t steps = 0;
  std::size_t clipped = 0;            // cell updates pushed outside [0, 1]
  std::size_t non_monotone_frames = 0;
  std::vector<std::string> warnings;
  std::vector<double> final_u;
};

/// Largest a_s over u in [0,1] and |s| <= s_max, sampled.
double max_flux_slope(const FluxModel& m, double s_max, int samples = 64);

/// Throws HypothesisViolation("oelip") for fluxes that are not
/// over-elliptic, and CFLViolation when grid.dt exceeds the bound.
Trajectory simulate_front(const FluxModel& m, const ReactionModel& r, const SimGrid& grid);

struct SpeedFit {
  std::array<double, 3> speed{};
  std::array<double, 3> stderr_{};
  double mean = 0.0;
  double spread = 0.0;  // (max - min) / |mean| across levels
  std::size_t samples = 0;
};

/// Least-squares slope of x_c(t) over t >= start_fraction * T. Throws
/// InsufficientWindow when the window would include the first quarter
/// of the run or holds fewer than 3 samples.
SpeedFit measure_speed(const Trajectory& traj, double start_fraction = 0.25, bool left_front = false);

/// Trajectory CSV: t, x_0.1, x_0.5, x_0.9.
std::string trajectory_csv(const Trajectory& traj);

}  // namespace frontspeed
