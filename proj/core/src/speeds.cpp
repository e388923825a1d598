#include "frontspeed/speeds.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <sstream>
#include <thread>

#include "frontspeed/errors.hpp"
#include "frontspeed/numerics.hpp"
#include "json.hpp"

namespace frontspeed {

std::string to_string(SpeedClass c) {
  switch (c) {
    case SpeedClass::below_sigma_s: return "below_sigma_s";
    case SpeedClass::at_sigma_s: return "at_sigma_s";
    case SpeedClass::above_sigma_s: return "above_sigma_s";
    case SpeedClass::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

std::string to_string(Attainment a) {
  switch (a) {
    case Attainment::attained: return "attained";
    case Attainment::not_attained: return "not-attained";
    case Attainment::unknown: return "unknown";
  }
  return "unknown";
}

QuadraticRoots quadratic_roots(double sigma, double gamma0) {
  if (gamma0 < 0.0) throw Error(ErrorCode::invalid_argument, "gamma0 must be nonnegative");
  const double disc = sigma * sigma - 4.0 * gamma0;
  if (disc < 0.0) {
    std::ostringstream os;
    os << "w^2 - " << sigma << " w + " << gamma0 << " has no real roots";
    throw Error(ErrorCode::no_real_roots, os.str());
  }
  QuadraticRoots q;
  q.discriminant = disc;
  const double big = 0.5 * sigma + std::sqrt(std::max(0.25 * sigma * sigma - gamma0, 0.0));
  q.w_plus = big;
  q.w_minus = (big > 0.0) ? gamma0 / big : 0.0;
  return q;
}

namespace {

BracketProbe probe_record(const SpeedSolution& sol, bool outcome) {
  BracketProbe p;
  p.sigma = sol.sigma;
  p.outcome = outcome;
  p.V_end = sol.V0;
  p.u_end = sol.u_end;
  p.alpha = sol.alpha;
  return p;
}

double safe_lower_bound(const FluxModel& m, const ReactionModel& r) {
  if (m.is_degenerate(0.0)) return 0.0;
  return lower_speed_bound(m, r);
}

// Doubling search for a true predicate followed by bisection to tol.
template <class Pred>
void bracket_and_bisect(SigmaSearch& s, double lb, double tol, double cap, Pred&& pred) {
  if (pred(lb)) {
    s.lo = s.hi = s.sigma = lb;
    return;
  }
  double lo = lb;
  double hi = std::min(lb + 1.0, cap);
  while (!pred(hi)) {
    if (hi >= cap) {
      std::ostringstream os;
      os << "no speed below the cap " << cap << " satisfies the predicate";
      throw Error(ErrorCode::bracket_not_closed, os.str());
    }
    lo = hi;
    hi = std::min(2.0 * hi, cap);
  }
  auto [a, b] = numerics::bisect_predicate(pred, lo, hi, tol);
  s.lo = a;
  s.hi = b;
  s.sigma = 0.5 * (a + b);
}

}  // namespace

SpeedClassification classify_speed(const FluxModel& m, const ReactionModel& r, double sigma,
                                   const SpeedSearchOptions& opts) {
  SpeedClassification c;
  const auto sol = integrate_halfplane(m, r, sigma, SolveMode::extended, opts.integration);
  c.V0 = sol.V0;
  if (!vanishes_at_zero(sol)) {
    c.verdict = SpeedClass::below_sigma_s;
    return c;
  }
  const double g0 = gamma0(m, r);
  if (sigma * sigma - 4.0 * g0 <= 1e-12 * (1.0 + sigma * sigma)) {
    // double root: the characterization needs sigma strictly above the bound
    c.verdict = SpeedClass::inconclusive;
    return c;
  }
  c.roots = quadratic_roots(sigma, g0);
  c.slope = slope_at_zero(sol);
  if (!c.slope) {
    c.verdict = SpeedClass::inconclusive;
    return c;
  }
  const double mid = 0.5 * sigma;
  c.dead_band = std::max(3.0 * c.slope->error, 0.1 * (c.roots->w_plus - c.roots->w_minus));
  if (c.slope->w > mid + c.dead_band) {
    c.verdict = SpeedClass::at_sigma_s;
  } else if (c.slope->w < mid - c.dead_band) {
    c.verdict = SpeedClass::above_sigma_s;
  } else {
    c.verdict = SpeedClass::inconclusive;
  }
  return c;
}

SigmaSResult find_sigma_s(const FluxModel& m, const ReactionModel& r, const SpeedSearchOptions& opts) {
  SigmaSResult res;
  res.lower_bound = safe_lower_bound(m, r);
  res.gamma0 = gamma0(m, r);
  auto pred = [&](double sigma) {
    const auto sol = integrate_halfplane(m, r, sigma, SolveMode::extended, opts.integration);
    const bool ok = vanishes_at_zero(sol);
    res.history.push_back(probe_record(sol, ok));
    return ok;
  };
  bracket_and_bisect(res, res.lower_bound, opts.tol_sigma, opts.cap, pred);
  res.at_lower_bound = res.hi == res.lower_bound;
  return res;
}

SigmaRResult find_sigma_r(const FluxModel& m, const ReactionModel& r, const SpeedSearchOptions& opts) {
  if (!m.degenerate_levels().empty()) {
    throw HypothesisViolation("H_r", "classic speeds need a flux without totally degenerate levels");
  }
  SigmaRResult res;
  const double lb = safe_lower_bound(m, r);
  std::optional<double> alpha_last_false;
  auto pred = [&](double sigma) {
    const auto sol = integrate_halfplane(m, r, sigma, SolveMode::classic, opts.integration);
    const bool ok = sol.reached_terminal && vanishes_at_zero(sol);
    res.history.push_back(probe_record(sol, ok));
    return ok;
  };
  bracket_and_bisect(res, lb, opts.tol_sigma, opts.cap, pred);
  if (res.lo == res.hi) {
    res.attainment = Attainment::attained;
    return res;
  }
  // The stall level on the false side either collapses to 0 under
  // refinement (attained) or stays bounded away from 0 (a jump in alpha).
  auto alpha_at = [&](double sigma) {
    for (auto it = res.history.rbegin(); it != res.history.rend(); ++it) {
      if (it->sigma == sigma) return it->alpha.value_or(0.0);
    }
    return integrate_halfplane(m, r, sigma, SolveMode::classic, opts.integration).alpha.value_or(0.0);
  };
  const double alpha_coarse = alpha_at(res.lo);
  auto [lo2, hi2] = numerics::bisect_predicate(pred, res.lo, res.hi, opts.tol_sigma / 16.0);
  const double alpha_fine = alpha_at(lo2);
  res.lo = lo2;
  res.hi = hi2;
  res.sigma = 0.5 * (lo2 + hi2);
  res.alpha_below = alpha_fine;
  if (alpha_fine > 1e-3 && alpha_fine >= 0.5 * alpha_coarse) {
    res.attainment = Attainment::not_attained;
  } else {
    res.attainment = Attainment::attained;
  }
  return res;
}

SpeedReport compute_speeds(const FluxModel& m, const ReactionModel& r, const SpeedSearchOptions& opts,
                           bool with_sigma_r) {
  SpeedReport rep;
  rep.model_name = m.name();
  rep.tol_sigma = opts.tol_sigma;
  const auto s = find_sigma_s(m, r, opts);
  rep.sigma_s = s.sigma;
  rep.lower_bound = s.lower_bound;
  rep.gamma0 = s.gamma0;
  rep.bracket_s = {s.lo, s.hi};
  rep.history_s = s.history;
  if (s.sigma * s.sigma > 4.0 * s.gamma0) {
    rep.roots_at_sigma_s = quadratic_roots(s.sigma, s.gamma0);
    const auto sol = integrate_halfplane(m, r, s.hi, SolveMode::extended, opts.integration);
    try {
      rep.slope_at_sigma_s = slope_at_zero(sol);
    } catch (const Error&) {
      // slope is diagnostic only
    }
  }
  if (!with_sigma_r) {
    rep.sigma_r_note = "not requested";
  } else if (!m.degenerate_levels().empty()) {
    rep.sigma_r_note = "flux has totally degenerate levels; classic speeds undefined";
  } else {
    const auto rr = find_sigma_r(m, r, opts);
    rep.sigma_r = rr.sigma;
    rep.bracket_r = std::make_pair(rr.lo, rr.hi);
    rep.history_r = rr.history;
    rep.attainment = rr.attainment;
    rep.alpha_below_r = rr.alpha_below;
  }
  return rep;
}

namespace {

nlohmann::json probes_json(const std::vector<BracketProbe>& probes) {
  auto arr = nlohmann::json::array();
  for (const auto& p : probes) {
    nlohmann::json j{{"sigma", p.sigma}, {"outcome", p.outcome}, {"V_end", p.V_end}, {"u_end", p.u_end}};
    j["alpha"] = p.alpha ? nlohmann::json(*p.alpha) : nlohmann::json(nullptr);
    arr.push_back(j);
  }
  return arr;
}

}  // namespace

std::string to_json(const SpeedReport& rep, int indent) {
  nlohmann::json j;
  j["model"] = rep.model_name;
  j["sigma_s"] = rep.sigma_s;
  j["sigma_r"] = rep.sigma_r ? nlohmann::json(*rep.sigma_r) : nlohmann::json(nullptr);
  j["lower_bound"] = rep.lower_bound;
  j["gamma0"] = rep.gamma0;
  j["tol_sigma"] = rep.tol_sigma;
  j["bracket_s"] = {rep.bracket_s.first, rep.bracket_s.second};
  j["bracket_r"] = rep.bracket_r ? nlohmann::json{rep.bracket_r->first, rep.bracket_r->second}
                                 : nlohmann::json(nullptr);
  j["attainment_hint"] = to_string(rep.attainment);
  j["alpha_below_sigma_r"] = rep.alpha_below_r ? nlohmann::json(*rep.alpha_below_r) : nlohmann::json(nullptr);
  if (rep.sigma_r) {
    j["gap_r_minus_s"] = *rep.sigma_r - rep.sigma_s;
    j["sigma_s_below_sigma_r"] = *rep.sigma_r - rep.sigma_s > 2.0 * rep.tol_sigma;
  }
  if (!rep.sigma_r_note.empty()) j["sigma_r_note"] = rep.sigma_r_note;
  if (rep.slope_at_sigma_s) {
    j["slope_at_sigma_s"] = {{"w", rep.slope_at_sigma_s->w}, {"error", rep.slope_at_sigma_s->error}};
  }
  if (rep.roots_at_sigma_s) {
    j["roots_at_sigma_s"] = {{"w_minus", rep.roots_at_sigma_s->w_minus},
                             {"w_plus", rep.roots_at_sigma_s->w_plus}};
  }
  j["bracket_history_s"] = probes_json(rep.history_s);
  j["bracket_history_r"] = probes_json(rep.history_r);
  return j.dump(indent);
}

Extrapolation extrapolate_to_zero(const std::vector<double>& eps, const std::vector<double>& sigma) {
  const std::size_t n = eps.size();
  if (n == 0 || sigma.size() != n) throw Error(ErrorCode::invalid_argument, "extrapolation needs matching rows");
  Extrapolation ex;
  if (n == 1) {
    ex.limit = sigma[0];
    ex.error = std::abs(sigma[0]);
    return ex;
  }
  const double e2 = eps[n - 2], e3 = eps[n - 1];
  const double s2 = sigma[n - 2], s3 = sigma[n - 1];
  const double linear = s3 - (s2 - s3) * e3 / (e2 - e3);
  ex.limit = linear;
  ex.error = std::abs(linear - s3);
  ex.order = 1.0;
  if (n < 3) return ex;
  const double e1 = eps[n - 3], s1 = sigma[n - 3];
  const double d12 = s1 - s2, d23 = s2 - s3;
  if (!(d12 * d23 > 0.0)) return ex;
  const double ratio = d12 / d23;
  auto model_ratio = [&](double p) {
    return (std::pow(e1, p) - std::pow(e2, p)) / (std::pow(e2, p) - std::pow(e3, p));
  };
  double p_lo = 0.1, p_hi = 4.0;
  if (ratio <= model_ratio(p_lo) || ratio >= model_ratio(p_hi)) return ex;
  for (int i = 0; i < 200 && p_hi - p_lo > 1e-12; ++i) {
    const double mid = 0.5 * (p_lo + p_hi);
    if (model_ratio(mid) < ratio) p_lo = mid; else p_hi = mid;
  }
  const double p = 0.5 * (p_lo + p_hi);
  const double C = d23 / (std::pow(e2, p) - std::pow(e3, p));
  ex.limit = s3 - C * std::pow(e3, p);
  ex.order = p;
  ex.richardson = true;
  ex.error = std::abs(ex.limit - linear);
  return ex;
}

SweepResult viscosity_sweep(const FluxModel& m, const ReactionModel& r, const std::vector<double>& eps,
                            const SpeedSearchOptions& opts, unsigned threads) {
  if (eps.empty()) throw Error(ErrorCode::invalid_argument, "empty viscosity list");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0)) throw Error(ErrorCode::invalid_argument, "viscosity coefficients must be positive");
    if (i > 0 && !(eps[i] < eps[i - 1])) {
      throw Error(ErrorCode::invalid_argument, "viscosity list must be strictly decreasing");
    }
  }
  SweepResult res;
  res.rows.resize(eps.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers = std::min<unsigned>(threads, static_cast<unsigned>(eps.size()));
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (std::size_t i = next++; i < eps.size(); i = next++) {
      const auto wrapped = with_viscosity(m, eps[i]);
      const auto rr = find_sigma_r(wrapped, r, opts);
      res.rows[i] = SweepRow{eps[i], rr.sigma, rr.lo, rr.hi, true};
    }
  };
  std::vector<std::future<void>> jobs;
  for (unsigned w = 0; w < workers; ++w) jobs.push_back(std::async(std::launch::async, work));
  for (auto& j : jobs) j.get();

  std::vector<double> es, ss;
  for (std::size_t i = 0; i < res.rows.size(); ++i) {
    if (i > 0) {
      res.rows[i].monotone = res.rows[i].sigma <= res.rows[i - 1].sigma + opts.tol_sigma;
      res.monotone = res.monotone && res.rows[i].monotone;
    }
    es.push_back(res.rows[i].eps);
    ss.push_back(res.rows[i].sigma);
  }
  res.extrapolation = extrapolate_to_zero(es, ss);
  return res;
}

}  // namespace frontspeed
