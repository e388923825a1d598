#include "frontspeed/pde_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "frontspeed/classify.hpp"
#include "frontspeed/errors.hpp"
#include "frontspeed/numerics.hpp"

namespace frontspeed {

double max_flux_slope(const FluxModel& m, double s_max, int samples) {
  double best = 0.0;
  for (int i = 0; i <= samples; ++i) {
    const double u = static_cast<double>(i) / samples;
    const double bound = std::min(s_max, 0.999 * m.omega_plus(u));
    for (int j = 0; j <= samples; ++j) {
      const double s = bound * static_cast<double>(j) / samples;
      best = std::max(best, m.da_ds(u, s));
    }
    // a_s usually peaks at s = 0; probe small gradients more finely
    for (double s = 1e-6; s < bound; s *= 10.0) best = std::max(best, m.da_ds(u, s));
  }
  return best;
}

namespace {

double crossing_from_right(const std::vector<double>& u, double c, double x_lo, double h) {
  for (std::size_t i = u.size() - 1; i > 0; --i) {
    if (u[i - 1] >= c && u[i] < c) {
      const double t = (u[i - 1] - c) / (u[i - 1] - u[i]);
      return x_lo + (static_cast<double>(i - 1) + t) * h;
    }
  }
  return std::nan("");
}

double crossing_from_left(const std::vector<double>& u, double c, double x_lo, double h) {
  for (std::size_t i = 0; i + 1 < u.size(); ++i) {
    if (u[i] < c && u[i + 1] >= c) {
      const double t = (c - u[i]) / (u[i + 1] - u[i]);
      return x_lo + (static_cast<double>(i) + t) * h;
    }
  }
  return std::nan("");
}

}  // namespace

Trajectory simulate_front(const FluxModel& m, const ReactionModel& r, const SimGrid& g) {
  const auto cls = classify_flux(m);
  if (!cls.over_elliptic) {
    throw HypothesisViolation("oelip", "the PDE oracle only runs over-elliptic fluxes");
  }
  if (!(g.h > 0.0) || !(g.L > 0.0) || !(g.T > 0.0)) throw Error(ErrorCode::invalid_argument, "bad grid");

  Trajectory tr;
  tr.dt_limit = g.h * g.h / (2.0 * max_flux_slope(m, 1.0 / g.h));
  if (g.dt > 0.0 && g.dt > tr.dt_limit) {
    throw Error(ErrorCode::cfl_violation,
                "dt=" + std::to_string(g.dt) + " exceeds h^2/(2 max a_s)=" + std::to_string(tr.dt_limit));
  }
  // an automatic dt is shrunk so outputs land on multiples of output_dt
  const double target = (g.dt > 0.0) ? g.dt : 0.9 * tr.dt_limit;
  const double ratio = g.output_dt / target;
  const std::size_t out_every =
      std::max<std::size_t>(1, static_cast<std::size_t>(g.dt > 0.0 ? std::llround(ratio) : std::ceil(ratio)));
  tr.dt = (g.dt > 0.0) ? g.dt : g.output_dt / static_cast<double>(out_every);

  const std::size_t n = static_cast<std::size_t>(std::llround(2.0 * g.L / g.h)) + 1;
  const double x_lo = -g.L;
  std::vector<double> u(n), next(n), F(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = x_lo + static_cast<double>(i) * g.h;
    switch (g.shape) {
      case InitialShape::step: u[i] = (x < g.x0) ? 1.0 : 0.0; break;
      case InitialShape::bump: u[i] = (std::abs(x - g.x0) < g.width) ? 1.0 : 0.0; break;
      case InitialShape::constant: u[i] = g.level; break;
    }
  }

  auto record = [&](double t) {
    tr.t.push_back(t);
    for (std::size_t k = 0; k < kFrontLevels.size(); ++k) {
      tr.x[k].push_back(crossing_from_right(u, kFrontLevels[k], x_lo, g.h));
      if (g.shape == InitialShape::bump) tr.x_left[k].push_back(crossing_from_left(u, kFrontLevels[k], x_lo, g.h));
    }
    if (g.shape == InitialShape::step) {
      for (std::size_t i = 0; i + 1 < n; ++i) {
        if (u[i + 1] > u[i] + 1e-12) {
          ++tr.non_monotone_frames;
          if (tr.warnings.empty()) tr.warnings.push_back("NonMonotoneProfile at t=" + std::to_string(t));
          break;
        }
      }
    }
  };

  const auto total = static_cast<std::size_t>(std::llround(g.T / tr.dt));
  record(0.0);
  const double inv_h = 1.0 / g.h;
  for (std::size_t step = 1; step <= total; ++step) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      F[i] = m.eval(0.5 * (u[i] + u[i + 1]), (u[i + 1] - u[i]) * inv_h);
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double right = (i + 1 < n) ? F[i] : 0.0;
      const double left = (i > 0) ? F[i - 1] : 0.0;
      double v = u[i] + tr.dt * ((right - left) * inv_h + r(u[i]));
      if (v < 0.0 || v > 1.0) {
        if (v < -1e-12 || v > 1.0 + 1e-12) ++tr.clipped;
        v = std::clamp(v, 0.0, 1.0);
      }
      next[i] = v;
    }
    u.swap(next);
    ++tr.steps;
    if (step % out_every == 0) record(static_cast<double>(step) * tr.dt);
  }
  if (tr.clipped > 0) tr.warnings.push_back("clipped " + std::to_string(tr.clipped) + " cell updates to [0,1]");
  tr.final_u = std::move(u);
  return tr;
}

SpeedFit measure_speed(const Trajectory& traj, double start_fraction, bool left_front) {
  if (traj.t.empty()) throw Error(ErrorCode::insufficient_window, "empty trajectory");
  if (start_fraction < 0.25) {
    throw Error(ErrorCode::insufficient_window, "fit window must exclude the first 25% of the run");
  }
  const double T = traj.t.back();
  const double t_start = traj.t.front() + start_fraction * (T - traj.t.front());
  SpeedFit fit;
  double lo = kInfinity, hi = -kInfinity, sum = 0.0;
  for (std::size_t k = 0; k < kFrontLevels.size(); ++k) {
    const auto& xs = left_front ? traj.x_left[k] : traj.x[k];
    std::vector<double> t, x;
    for (std::size_t i = 0; i < traj.t.size() && i < xs.size(); ++i) {
      if (traj.t[i] >= t_start && std::isfinite(xs[i])) {
        t.push_back(traj.t[i]);
        x.push_back(xs[i]);
      }
    }
    if (t.size() < 3) throw Error(ErrorCode::insufficient_window, "fewer than 3 samples in the fit window");
    const auto line = numerics::fit_line(t, x);
    fit.speed[k] = line.slope;
    fit.stderr_[k] = line.slope_stderr;
    fit.samples = t.size();
    lo = std::min(lo, line.slope);
    hi = std::max(hi, line.slope);
    sum += line.slope;
  }
  fit.mean = sum / static_cast<double>(kFrontLevels.size());
  fit.spread = (fit.mean != 0.0) ? (hi - lo) / std::abs(fit.mean) : 0.0;
  return fit;
}

std::string trajectory_csv(const Trajectory& traj) {
  std::string out = "t,x_0.1,x_0.5,x_0.9\n";
  char buf[128];
  for (std::size_t i = 0; i < traj.t.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.12e,%.12e,%.12e,%.12e\n", traj.t[i], traj.x[0][i], traj.x[1][i],
                  traj.x[2][i]);
    out += buf;
  }
  return out;
}

}  // namespace frontspeed
