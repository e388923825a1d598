#include "frontspeed/halfplane.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "frontspeed/errors.hpp"
#include "frontspeed/numerics.hpp"

namespace frontspeed {

std::string to_string(SolveMode mode) { return mode == SolveMode::classic ? "classic" : "extended"; }

double phi_extended(const FluxModel& m, const ReactionModel& r, double u, double R, double sigma) {
  if (R <= 0.0) return -2.0 * r(u) * m.da_ds(u, 0.0);
  const double V = std::sqrt(R);
  if (V >= m.a_plus(u) || m.is_degenerate(u)) return 2.0 * sigma * V;
  // 2 sqrt(R) (sigma - f / g) written through the secant v/g, which stays
  // bounded as V -> 0
  return 2.0 * V * sigma - 2.0 * r(u) * m.secant(u, V);
}

double series_start_slope(const FluxModel& m, const ReactionModel& r, double sigma) {
  const double c = -r.df1() * m.da_ds(1.0, 0.0);
  return 0.5 * (-sigma + std::sqrt(sigma * sigma + 4.0 * std::max(c, 0.0)));
}

namespace {

// Dormand-Prince 5(4) tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

class Solver {
 public:
  Solver(const FluxModel& m, const ReactionModel& r, double sigma, SolveMode mode,
         const IntegrationOptions& opts)
      : m_(m), r_(r), sigma_(sigma), mode_(mode), opts_(opts) {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
      throw Error(ErrorCode::invalid_argument, "speed must be finite and nonnegative");
    }
    for (const auto& iv : m.degenerate_levels()) {
      if (iv.hi > iv.lo) degenerate_.push_back(iv);
    }
    sol_.sigma = sigma;
    sol_.mode = mode;
  }

  SpeedSolution run(double start, double R_start, bool top_node) {
    if (top_node) push(1.0, 0.0, 0.0);
    double u = start;
    double R = R_start;
    bool stopped = false;
    if (top_node && containing(1.0) != nullptr) {
      // u = 1 is totally degenerate: the solution starts at V = 0 there
      u = 1.0;
      R = 0.0;
    } else {
      push(u, R, rhs(u, R));
      saturated_ = excess(u, R) <= 0.0;
      if (saturated_) open_hi_ = u;
    }
    double h = top_node ? opts_.delta0 : 1e-6;
    while (u > opts_.u_min && !stopped) {
      if (const Interval* iv = containing(u)) {
        if (mode_ == SolveMode::classic) {
          stall(iv->hi, 0.0);
          stopped = true;
          break;
        }
        const double a = std::max(iv->lo, opts_.u_min);
        degenerate_segment(u, std::sqrt(std::max(R, 0.0)), a);
        R = sol_.R.back();
        u = a;
        h = 1e-6;
        saturated_ = excess(u, R) <= 0.0;
        if (saturated_) {
          if (!open_hi_) open_hi_ = iv->hi;
        } else {
          close_span(u);
        }
        continue;
      }
      double target = opts_.u_min;
      for (const auto& iv : degenerate_) {
        if (iv.hi < u && iv.hi > target) target = iv.hi;
      }
      stopped = regular_segment(u, R, target, h);
    }
    if (!stopped) {
      sol_.reached_terminal = true;
      if (mode_ == SolveMode::classic) sol_.alpha = 0.0;
    }
    sol_.u_end = sol_.u.back();
    sol_.V0 = sol_.V.back();
    if (open_hi_) close_span(sol_.u_end);
    merge_spans();
    return std::move(sol_);
  }

 private:
  double rhs(double u, double R) const { return phi_extended(m_, r_, u, R, sigma_); }

  // a_plus^2 - R; positive below the saturation curve
  double excess(double u, double R) const {
    if (m_.is_degenerate(u)) return -kInfinity;
    const double ap = m_.a_plus(u);
    if (!std::isfinite(ap)) return kInfinity;
    return ap * ap - R;
  }

  const Interval* containing(double u) const {
    for (const auto& iv : degenerate_) {
      if (u > iv.lo && u <= iv.hi) return &iv;
    }
    return nullptr;
  }

  void push(double u, double R, double d) {
    if (!std::isfinite(R) || !std::isfinite(d)) {
      std::ostringstream os;
      os << "non-finite state at u=" << u << " (sigma=" << sigma_ << ")";
      throw Error(ErrorCode::non_finite, os.str());
    }
    sol_.u.push_back(u);
    sol_.R.push_back(R);
    sol_.dR.push_back(d);
    sol_.V.push_back(std::sqrt(std::max(R, 0.0)));
  }

  void close_span(double lo) {
    if (open_hi_) {
      sol_.saturated_spans.push_back({lo, *open_hi_});
      open_hi_.reset();
    }
  }

  void stall(double u, double R) {
    if (sol_.u.back() != u) push(u, R, rhs(u, R));
    sol_.alpha = u;
    sol_.reached_terminal = false;
  }

  void degenerate_segment(double b, double Vb, double a) {
    // V' = sigma wherever V > 0; V stays pinned at 0 once it reaches it
    std::vector<double> levels;
    constexpr int n = 32;
    for (int i = 1; i <= n; ++i) levels.push_back(b - (b - a) * i / n);
    if (sigma_ > 0.0) {
      const double z = b - Vb / sigma_;
      if (z > a && z < b) levels.push_back(z);
    }
    std::sort(levels.begin(), levels.end(), std::greater<>());
    for (double x : levels) {
      const double V = (sigma_ > 0.0) ? std::max(0.0, Vb - sigma_ * (b - x)) : Vb;
      push(x, V * V, 2.0 * sigma_ * V);
    }
    if (!open_hi_) open_hi_ = b;
  }

  double refine_event(double u0, double R0, double d0, double u1, double R1, double d1) const {
    // excess > 0 at one end, <= 0 at the other
    double hi = u0, lo = u1;
    const bool hi_positive = excess(u0, R0) > 0.0;
    while (hi - lo > opts_.event_tol) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const double Rm = numerics::hermite(u0, u1, R0, R1, d0, d1, mid).value;
      if ((excess(mid, Rm) > 0.0) == hi_positive) hi = mid; else lo = mid;
    }
    return 0.5 * (lo + hi);
  }

  // Returns true when classic mode stalled inside the segment.
  bool regular_segment(double& u, double& R, double target, double& h) {
    double d = rhs(u, R);
    while (u > target) {
      if (++steps_ > opts_.max_steps) throw Error(ErrorCode::step_failure, "step budget exhausted");
      const double cap = std::max(opts_.h_min, std::min(opts_.h_max, 0.25 * std::min(u, 1.0 - u + 1e-3)));
      h = std::min({h, cap, u - target});
      const double s = -h;
      const double k1 = d;
      const double k2 = rhs(u + c2 * s, R + s * (a21 * k1));
      const double k3 = rhs(u + c3 * s, R + s * (a31 * k1 + a32 * k2));
      const double k4 = rhs(u + c4 * s, R + s * (a41 * k1 + a42 * k2 + a43 * k3));
      const double k5 = rhs(u + c5 * s, R + s * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
      const double k6 = rhs(u + s, R + s * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
      const double Rn = R + s * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      const double un = (h == u - target) ? target : u + s;
      const double k7 = rhs(un, Rn);
      const double err_abs = std::abs(s * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7));
      const double scale = opts_.atol + opts_.rtol * std::max(std::abs(R), std::abs(Rn));
      const double err = err_abs / scale;
      if (!std::isfinite(Rn) || !std::isfinite(err)) {
        if (h <= opts_.h_min) throw Error(ErrorCode::non_finite, "non-finite step result");
        h = std::max(0.25 * h, opts_.h_min);
        ++sol_.rejected_steps;
        continue;
      }
      if (err > 1.0) {
        if (h <= opts_.h_min) {
          std::ostringstream os;
          os << "step size underflow at u=" << u << " (sigma=" << sigma_ << ")";
          throw Error(ErrorCode::step_failure, os.str());
        }
        h = std::max(h * std::max(0.2, 0.9 * std::pow(err, -0.2)), opts_.h_min);
        ++sol_.rejected_steps;
        continue;
      }
      ++sol_.accepted_steps;
      const double e_old = excess(u, R);
      const double e_new = excess(un, Rn);
      const bool was_sat = e_old <= 0.0;
      const bool now_sat = e_new <= 0.0;
      if (was_sat != now_sat) {
        const double x = refine_event(u, R, d, un, Rn, k7);
        if (now_sat && mode_ == SolveMode::classic) {
          const double ap = m_.a_plus(x);
          stall(x, ap * ap);
          u = x;
          R = ap * ap;
          return true;
        }
        if (now_sat) open_hi_ = x; else close_span(x);
      }
      u = un;
      R = std::max(Rn, 0.0);
      d = (Rn < 0.0) ? rhs(u, R) : k7;
      push(u, R, d);
      h *= (err == 0.0) ? 5.0 : std::min(5.0, 0.9 * std::pow(err, -0.2));
    }
    return false;
  }

  void merge_spans() {
    auto& spans = sol_.saturated_spans;
    std::sort(spans.begin(), spans.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> merged;
    for (const auto& s : spans) {
      if (!merged.empty() && s.lo <= merged.back().hi + 1e-12) {
        merged.back().hi = std::max(merged.back().hi, s.hi);
      } else {
        merged.push_back(s);
      }
    }
    spans = std::move(merged);
  }

  const FluxModel& m_;
  const ReactionModel& r_;
  double sigma_;
  SolveMode mode_;
  IntegrationOptions opts_;
  std::vector<Interval> degenerate_;
  SpeedSolution sol_;
  bool saturated_ = false;
  std::optional<double> open_hi_;
  std::size_t steps_ = 0;
};

}  // namespace

SpeedSolution integrate_halfplane(const FluxModel& m, const ReactionModel& r, double sigma,
                                  SolveMode mode, const IntegrationOptions& opts) {
  const double slope = series_start_slope(m, r, sigma);
  const double start = 1.0 - opts.delta0;
  const double R0 = slope * opts.delta0 * slope * opts.delta0;
  return Solver(m, r, sigma, mode, opts).run(start, R0, true);
}

SpeedSolution integrate_halfplane_from(const FluxModel& m, const ReactionModel& r, double sigma,
                                       SolveMode mode, double start, double rho,
                                       const IntegrationOptions& opts) {
  return Solver(m, r, sigma, mode, opts).run(start, rho * rho, false);
}

// ------------------------------------------------------- dense output

namespace {

// index i with u[i] >= level >= u[i+1] on the decreasing grid
std::size_t bracket_index(const std::vector<double>& u, double level) {
  auto it = std::lower_bound(u.begin(), u.end(), level, std::greater<>());
  std::size_t j = static_cast<std::size_t>(it - u.begin());
  if (j == 0) return 0;
  if (j >= u.size()) return u.size() - 2;
  return j - 1;
}

}  // namespace

double SpeedSolution::R_at(double level) const {
  if (u.size() == 1) return R.front();
  if (level >= u.front()) return R.front();
  if (level <= u.back()) return R.back();
  const std::size_t i = bracket_index(u, level);
  if (u[i] == u[i + 1]) return R[i];
  return numerics::hermite(u[i], u[i + 1], R[i], R[i + 1], dR[i], dR[i + 1], level).value;
}

double SpeedSolution::V_at(double level) const { return std::sqrt(std::max(R_at(level), 0.0)); }

double SpeedSolution::dV_at(double level) const {
  if (u.size() < 2) return 0.0;
  const double lv = std::clamp(level, u.back(), u.front());
  const std::size_t i = bracket_index(u, lv);
  if (u[i] == u[i + 1]) return 0.0;
  const auto hm = numerics::hermite(u[i], u[i + 1], R[i], R[i + 1], dR[i], dR[i + 1], lv);
  const double V = std::sqrt(std::max(hm.value, 0.0));
  if (V <= 1e-300) return 0.0;
  return hm.derivative / (2.0 * V);
}

bool SpeedSolution::in_saturated_span(double level) const {
  for (const auto& s : saturated_spans) {
    if (s.contains(level)) return true;
  }
  return false;
}

bool vanishes_at_zero(const SpeedSolution& sol) {
  if (sol.mode == SolveMode::classic && !sol.reached_terminal) return false;
  return sol.V0 <= 0.5 * sol.sigma * sol.u_end;
}

std::optional<SlopeEstimate> slope_at_zero(const SpeedSolution& sol) {
  if (!sol.reached_terminal || !vanishes_at_zero(sol)) return std::nullopt;
  std::size_t below = 0;
  for (double x : sol.u) below += (x < 1e-3) ? 1 : 0;
  if (below < 8) throw Error(ErrorCode::insufficient_resolution, "fewer than 8 samples below u = 1e-3");

  // T = V/u = w + c u on a decade; the spread between two overlapping
  // decades is the error estimate
  auto fit = [&](double lo, double hi) -> std::optional<numerics::LineFit> {
    std::vector<double> xs, ts;
    for (std::size_t i = 0; i < sol.u.size(); ++i) {
      if (sol.u[i] >= lo && sol.u[i] <= hi && sol.u[i] > 0.0) {
        xs.push_back(sol.u[i]);
        ts.push_back(sol.V[i] / sol.u[i]);
      }
    }
    if (xs.size() < 3) return std::nullopt;
    return numerics::fit_line(xs, ts);
  };
  const double lo = std::max(1e-4, 10.0 * sol.u_end);
  auto main = fit(lo, 10.0 * lo);
  auto shifted = fit(2.0 * lo, 20.0 * lo);
  if (!main) throw Error(ErrorCode::insufficient_resolution, "too few nodes in the fit decade");
  SlopeEstimate est;
  est.w = main->intercept;
  est.error = std::max(shifted ? std::abs(shifted->intercept - main->intercept) : 0.0,
                       3.0 * main->intercept_stderr);
  est.samples = below;
  return est;
}

OrderingReport compare_speed_solutions(const SpeedSolution& low, const SpeedSolution& high, double tol) {
  OrderingReport rep;
  const double top = std::min(low.u.size() > 1 ? low.u[1] : 1.0, high.u.size() > 1 ? high.u[1] : 1.0);
  const double bottom = std::max(low.u_end, high.u_end);
  std::vector<double> grid;
  for (double x : low.u) {
    if (x <= top && x >= bottom) grid.push_back(x);
  }
  for (double x : high.u) {
    if (x <= top && x >= bottom) grid.push_back(x);
  }
  for (double x : grid) {
    const double diff = high.V_at(x) - low.V_at(x);
    if (diff > rep.max_violation) {
      rep.max_violation = diff;
      rep.worst_level = x;
    }
  }
  rep.points = grid.size();
  if (low.alpha && high.alpha) rep.alpha_ordered = *low.alpha >= *high.alpha - tol;
  rep.pass = rep.max_violation <= tol && rep.alpha_ordered;
  return rep;
}

}  // namespace frontspeed
