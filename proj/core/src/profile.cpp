#include "frontspeed/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "frontspeed/errors.hpp"
#include "frontspeed/numerics.hpp"

namespace frontspeed {

std::string to_string(ProfileKind kind) {
  return kind == ProfileKind::classic ? "classic" : "flux-saturated";
}

namespace {

// Offsets 10^(-j/n) from an attractor, between `smallest` and `largest`.
void add_graded(std::vector<double>& pts, double p, double dir, double smallest, double largest, int per_decade,
                double lo, double hi) {
  if (!(largest > smallest)) return;
  const int n = static_cast<int>(std::ceil(per_decade * std::log10(largest / smallest)));
  for (int j = 0; j <= n; ++j) {
    const double x = p + dir * largest * std::pow(10.0, -static_cast<double>(j) / per_decade);
    if (x > lo && x < hi) pts.push_back(x);
  }
}

}  // namespace

double GMap::integrand(double u) const {
  if (sol_.in_saturated_span(u)) return 0.0;
  return flux_->h_reciprocal(u, sol_.V_at(u));
}

std::size_t GMap::cell(double u) const {
  auto it = std::upper_bound(knots_.begin(), knots_.end(), u);
  std::size_t i = static_cast<std::size_t>(it - knots_.begin());
  if (i == 0) return 0;
  return std::min(i - 1, knots_.size() - 2);
}

double GMap::operator()(double u) const {
  const double v = std::clamp(u, knots_.front(), knots_.back());
  const std::size_t i = cell(v);
  if (flat_[i] || v == knots_[i]) return G_[i];
  return G_[i] + numerics::gauss_legendre([this](double x) { return integrand(x); }, knots_[i], v);
}

double GMap::level(double xi) const { return static_cast<double>(level_extended(xi)); }

long double GMap::level_extended(long double xi) const {
  using L = long double;
  if (xi <= G_.front()) return knots_.front();
  if (xi >= G_.back()) return knots_.back();
  auto it = std::upper_bound(G_.begin(), G_.end(), xi, [](L x, double g) { return x < g; });
  const std::size_t i = static_cast<std::size_t>(it - G_.begin()) - 1;
  L a = knots_[i], b = knots_[i + 1];
  if (xi == G_[i]) return a;
  L u = a + (b - a) * (xi - G_[i]) / (G_[i + 1] - G_[i]);
  // safeguarded Newton; G is always integrated from the cell's left knot
  const L base = knots_[i];
  auto G_at = [&](L x) {
    const L mid = 0.5L * (base + x), half = 0.5L * (x - base);
    L sum = 0.0L;
    for (std::size_t q = 0; q < numerics::GaussLegendre10::nodes.size(); ++q) {
      sum += numerics::GaussLegendre10::weights[q] *
             integrand(static_cast<double>(mid + half * numerics::GaussLegendre10::nodes[q]));
    }
    return (static_cast<L>(G_[i]) - xi) + sum * half;
  };
  // stop on the Newton step itself: the profile is differenced twice
  // downstream, so a residual test in G leaves too much noise in u
  const L ulp = 2.0L * std::numeric_limits<L>::epsilon();
  for (int it_count = 0; it_count < 100; ++it_count) {
    const L Fu = G_at(u);
    if (Fu == 0.0L) break;
    if (Fu < 0.0L) a = u; else b = u;
    if (b - a <= ulp * b) break;
    const L d = integrand(static_cast<double>(u));
    L next = (d > 0.0L) ? u - Fu / d : 0.5L * (a + b);
    if (!(next > a && next < b)) next = 0.5L * (a + b);
    const bool done = std::abs(next - u) <= ulp * u;
    u = next;
    if (done) break;
  }
  return u;
}

std::vector<GMap::Plateau> GMap::jumps() const {
  std::vector<Plateau> out;
  for (const auto& p : plateaus_) {
    if (p.mu > knots_.front() && p.nu < knots_.back()) out.push_back(p);
  }
  return out;
}

GMap build_G(const FluxModel& m, const SpeedSolution& sol, double u0, const ProfileOptions& opts) {
  if (!vanishes_at_zero(sol)) {
    throw Error(ErrorCode::invalid_argument, "profile needs a solution vanishing at 0 (sigma >= sigma_s)");
  }
  GMap G;
  G.flux_ = m;
  G.sol_ = sol;
  G.sigma_ = sol.sigma;
  G.anchor_ = u0;

  const double lo = std::max(opts.u_lo, sol.u_end);
  const double hi = 1.0 - opts.u_lo;
  if (!(u0 > lo && u0 < hi)) throw Error(ErrorCode::invalid_argument, "anchor outside the level window");

  std::vector<double> breaks = {u0};
  for (const auto& s : sol.saturated_spans) {
    breaks.push_back(s.lo);
    breaks.push_back(s.hi);
  }
  for (const auto& s : m.degenerate_levels()) {
    breaks.push_back(s.lo);
    breaks.push_back(s.hi);
  }

  std::vector<double> pts = {lo, hi};
  const double w = opts.cell_width;
  const int nb = static_cast<int>(std::floor((hi - lo) / w));
  for (int j = 1; j <= nb; ++j) pts.push_back(lo + j * w);
  add_graded(pts, 0.0, 1.0, lo, w, opts.cells_per_decade, lo, hi);
  add_graded(pts, 1.0, -1.0, opts.u_lo, w, opts.cells_per_decade, lo, hi);
  for (double p : breaks) {
    if (!(p > lo && p < hi)) continue;
    pts.push_back(p);
    add_graded(pts, p, 1.0, 1e-10, w, opts.cells_per_decade, lo, hi);
    add_graded(pts, p, -1.0, 1e-10, w, opts.cells_per_decade, lo, hi);
  }
  std::sort(pts.begin(), pts.end());
  std::vector<double> knots;
  knots.reserve(pts.size());
  for (double p : pts) {
    const bool is_break = std::find(breaks.begin(), breaks.end(), p) != breaks.end();
    if (!knots.empty() && p - knots.back() <= 1e-14 * std::max(1.0, p)) {
      if (is_break) knots.back() = p;  // keep the exact level
      continue;
    }
    knots.push_back(p);
  }

  const std::size_t cells = knots.size() - 1;
  std::vector<double> I(cells, 0.0);
  std::vector<char> tiny(cells, 0);
  for (std::size_t i = 0; i < cells; ++i) {
    const double a = knots[i], b = knots[i + 1];
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double sum = 0.0, peak = 0.0;
    for (std::size_t q = 0; q < numerics::GaussLegendre10::nodes.size(); ++q) {
      const double v = G.integrand(mid + half * numerics::GaussLegendre10::nodes[q]);
      peak = std::max(peak, v);
      sum += numerics::GaussLegendre10::weights[q] * v;
    }
    I[i] = sum * half;
    tiny[i] = peak < opts.plateau_threshold;
  }

  std::vector<char> flat(cells, 0);
  for (std::size_t i = 0; i < cells;) {
    if (!tiny[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < cells && tiny[j]) ++j;
    if (j - i >= opts.plateau_min_cells) {
      for (std::size_t k = i; k < j; ++k) {
        flat[k] = 1;
        I[k] = 0.0;
      }
    }
    i = j;
  }

  const auto anchor_it = std::lower_bound(knots.begin(), knots.end(), u0);
  const std::size_t ai = static_cast<std::size_t>(anchor_it - knots.begin());
  const bool left_flat = ai > 0 && flat[ai - 1];
  const bool right_flat = ai < cells && flat[ai];
  if (left_flat && right_flat) throw Error(ErrorCode::anchor_on_plateau, "anchor level lies on a plateau of G");
  // accumulate outward from the anchor (Neumaier) so rounding in G grows
  // with |G| rather than with the distance from u_lo
  std::vector<double> cum(knots.size(), 0.0);
  {
    double sum = 0.0, comp = 0.0;
    auto add = [&](double x) {
      const double t = sum + x;
      comp += (std::abs(sum) >= std::abs(x)) ? (sum - t) + x : (x - t) + sum;
      sum = t;
    };
    for (std::size_t i = ai; i < cells; ++i) {
      add(I[i]);
      cum[i + 1] = sum + comp;
    }
    sum = comp = 0.0;
    for (std::size_t i = ai; i-- > 0;) {
      add(-I[i]);
      cum[i] = sum + comp;
    }
  }

  G.knots_ = std::move(knots);
  G.G_ = std::move(cum);
  G.flat_ = std::move(flat);

  for (std::size_t i = 0; i < cells;) {
    if (!G.flat_[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < cells && G.flat_[j]) ++j;
    G.plateaus_.push_back({G.knots_[i], G.knots_[j], G.G_[i]});
    i = j;
  }

  // logarithmic (or faster) growth keeps the per-decade increment from
  // shrinking; an integrable tail loses a fixed factor per decade
  auto decade_growth = [&](double a, double b) { return std::abs(G(b) - G(a)); };
  if (lo <= 1e-3) {
    const double g1 = decade_growth(lo, 10 * lo), g2 = decade_growth(10 * lo, 100 * lo);
    G.diverges_low_ = g1 > 0.0 && g1 >= 0.5 * g2;
  }
  {
    const double e = opts.u_lo;
    const double g1 = decade_growth(1 - 10 * e, 1 - e), g2 = decade_growth(1 - 100 * e, 1 - 10 * e);
    G.diverges_high_ = g1 > 0.0 && g1 >= 0.5 * g2;
  }
  return G;
}

double default_anchor(const FluxModel& m, const SpeedSolution& sol) {
  std::vector<Interval> blocked = sol.saturated_spans;
  for (const auto& d : m.degenerate_levels()) blocked.push_back(d);
  auto blocked_at = [&](double u) {
    return std::any_of(blocked.begin(), blocked.end(), [u](const Interval& b) { return b.contains(u); });
  };
  if (!blocked_at(0.5)) return 0.5;
  std::sort(blocked.begin(), blocked.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  double best = 0.5, width = -1.0, edge = std::max(sol.u_end, 0.0);
  for (const auto& b : blocked) {
    if (b.lo - edge > width) {
      width = b.lo - edge;
      best = 0.5 * (edge + b.lo);
    }
    edge = std::max(edge, b.hi);
  }
  if (1.0 - edge > width) best = 0.5 * (edge + 1.0);
  return best;
}

std::vector<double> uniform_grid(double lo, double hi, double h) {
  std::vector<double> out;
  if (!(h > 0.0) || hi < lo) return out;
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / h + 1e-9));
  out.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) out.push_back(lo + static_cast<double>(i) * h);
  return out;
}

WaveProfile invert_profile(const GMap& G, const std::vector<double>& xi_grid) {
  WaveProfile p;
  p.sigma = G.sigma();
  p.anchor = G.anchor();
  p.xi = xi_grid;
  p.u.reserve(xi_grid.size());
  for (double xi : xi_grid) p.u.push_back(G.level(xi));
  p.is_jump.assign(xi_grid.size(), 0);
  for (const auto& j : G.jumps()) {
    p.saturation_points.push_back({j.xi, j.mu, j.nu});
    auto it = std::lower_bound(xi_grid.begin(), xi_grid.end(), j.xi);
    if (it != xi_grid.end() && it != xi_grid.begin()) p.is_jump[static_cast<std::size_t>(it - xi_grid.begin())] = 1;
  }
  p.kind = p.saturation_points.empty() ? ProfileKind::classic : ProfileKind::flux_saturated;
  return p;
}

namespace {

double finite_a_plus(const FluxModel& m, double u) {
  const double a = m.a_plus(u);
  if (!std::isfinite(a)) {
    throw Error(ErrorCode::unbounded_a_plus, "saturation value is infinite at a jump endpoint u=" + std::to_string(u));
  }
  return a;
}

}  // namespace

std::vector<double> check_rankine_hugoniot(const WaveProfile& p, const FluxModel& m, double sigma) {
  std::vector<double> out;
  for (const auto& s : p.saturation_points) {
    out.push_back(std::abs(sigma * (s.nu - s.mu) - (finite_a_plus(m, s.nu) - finite_a_plus(m, s.mu))));
  }
  return out;
}

std::vector<double> check_bertsch_dalpasso(const WaveProfile& p, const FluxModel& m, double /*sigma*/,
                                           std::size_t samples) {
  std::vector<double> out;
  for (const auto& s : p.saturation_points) {
    if (!(s.nu > s.mu)) {
      out.push_back(0.0);
      continue;
    }
    const double a_mu = finite_a_plus(m, s.mu);
    const double chord = (finite_a_plus(m, s.nu) - a_mu) / (s.nu - s.mu);
    double worst = -kInfinity;
    for (std::size_t j = 1; j <= samples; ++j) {
      const double u = s.mu + (s.nu - s.mu) * static_cast<double>(j) / static_cast<double>(samples);
      worst = std::max(worst, (finite_a_plus(m, u) - a_mu) / (u - s.mu) - chord);
    }
    out.push_back(worst);
  }
  return out;
}

std::vector<double> check_h_continuity(const WaveProfile& p, const FluxModel& m, double sigma) {
  std::vector<double> out;
  for (const auto& s : p.saturation_points) {
    const double left = finite_a_plus(m, s.mu) - sigma * s.mu;
    const double right = finite_a_plus(m, s.nu) - sigma * s.nu;
    out.push_back(std::abs(left - right));
  }
  return out;
}

JumpCheckReport check_jumps(const WaveProfile& p, const FluxModel& m, double sigma, double tol) {
  JumpCheckReport rep;
  rep.tol = tol;
  const auto rh = check_rankine_hugoniot(p, m, sigma);
  const auto bdp = check_bertsch_dalpasso(p, m, sigma);
  const auto hc = check_h_continuity(p, m, sigma);
  for (std::size_t i = 0; i < p.saturation_points.size(); ++i) {
    const auto& s = p.saturation_points[i];
    rep.jumps.push_back({s.xi, s.mu, s.nu, rh[i], bdp[i], hc[i]});
    rep.rh_ok = rep.rh_ok && rh[i] <= tol;
    rep.bdp_ok = rep.bdp_ok && bdp[i] <= tol;
    rep.h_ok = rep.h_ok && hc[i] <= tol;
  }
  return rep;
}

ClassicResidual residual_classic(const WaveProfile& p, const FluxModel& m, const ReactionModel& r, double sigma,
                                 double window) {
  ClassicResidual out;
  const std::size_t n = p.xi.size();
  if (n < 3) return out;
  const double h = (p.xi.back() - p.xi.front()) / static_cast<double>(n - 1);
  auto face = [&](std::size_t i) {
    return m.eval(0.5 * (p.u[i] + p.u[i + 1]), (p.u[i + 1] - p.u[i]) / h);
  };
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double u = p.u[i];
    if (u < window || u > 1.0 - window) continue;
    if (p.is_jump[i] || p.is_jump[i + 1]) continue;
    const double res = (face(i) - face(i - 1)) / h - sigma * (p.u[i + 1] - p.u[i - 1]) / (2.0 * h) + r(u);
    ++out.points;
    if (std::abs(res) > out.max_abs) {
      out.max_abs = std::abs(res);
      out.worst_xi = p.xi[i];
    }
  }
  return out;
}

}  // namespace frontspeed

namespace frontspeed {

ClassicResidual residual_classic(const GMap& G, const FluxModel& m, const ReactionModel& r, double xi_lo,
                                 double xi_hi, double h, double window) {
  using L = long double;
  ClassicResidual out;
  const auto n = static_cast<std::size_t>(std::floor((xi_hi - xi_lo) / h + 1e-9)) + 1;
  if (n < 3) return out;
  std::vector<L> u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = G.level_extended(static_cast<L>(xi_lo) + static_cast<L>(i) * h);
  std::vector<char> jump_near(n, 0);
  for (const auto& j : G.jumps()) {
    const double k = (j.xi - xi_lo) / h;
    for (double d = -1.0; d <= 2.0; d += 1.0) {
      const double idx = std::floor(k) + d;
      if (idx >= 0.0 && idx < static_cast<double>(n)) jump_near[static_cast<std::size_t>(idx)] = 1;
    }
  }
  const L hl = h;
  auto face = [&](std::size_t i) {
    return static_cast<L>(m.eval(static_cast<double>(0.5L * (u[i] + u[i + 1])),
                                 static_cast<double>((u[i + 1] - u[i]) / hl)));
  };
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double ui = static_cast<double>(u[i]);
    if (ui < window || ui > 1.0 - window || jump_near[i]) continue;
    const L res = (face(i) - face(i - 1)) / hl - static_cast<L>(G.sigma()) * (u[i + 1] - u[i - 1]) / (2.0L * hl) +
                  static_cast<L>(r(ui));
    ++out.points;
    if (std::abs(static_cast<double>(res)) > out.max_abs) {
      out.max_abs = std::abs(static_cast<double>(res));
      out.worst_xi = xi_lo + static_cast<double>(i) * h;
    }
  }
  return out;
}

}  // namespace frontspeed
