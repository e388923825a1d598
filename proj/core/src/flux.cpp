#include "frontspeed/flux.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "frontspeed/errors.hpp"
#include "frontspeed/numerics.hpp"

namespace frontspeed {

std::string to_string(FluxKind kind) {
  switch (kind) {
    case FluxKind::linear: return "linear";
    case FluxKind::separable: return "separable";
    case FluxKind::piecewise: return "piecewise";
    case FluxKind::viscosity_wrapped: return "viscosity-wrapped";
    case FluxKind::custom: return "custom";
  }
  return "custom";
}

// ---------------------------------------------------------------- Flux

double Flux::domain_bound(double) const { return kInfinity; }

double Flux::inverse(double u, double v) const {
  if (v <= 0.0) return 0.0;
  const double omega = domain_bound(u);
  const double s_cap = std::isfinite(omega) ? omega * (1.0 - 1e-14) : 1e300;
  const double d0 = slope(u, 0.0);
  double hi = (d0 > 0.0) ? std::min(2.0 * v / d0, s_cap) : std::min(1.0, s_cap);
  double lo = 0.0;
  double a_hi = value(u, hi);
  while (a_hi < v) {
    if (hi >= s_cap) {
      throw Error(ErrorCode::saturated, "flow value not reached inside the gradient domain");
    }
    lo = hi;
    hi = std::isfinite(omega) ? 0.5 * (hi + s_cap) : std::min(4.0 * hi, s_cap);
    a_hi = value(u, hi);
  }
  const double a_lo = value(u, lo);
  numerics::RootOptions opts;
  opts.f_tol = 1e-13 * std::max(1.0, v);
  return numerics::solve_increasing([&](double s) { return value(u, s) - v; }, lo, hi, a_lo - v,
                                    a_hi - v, opts);
}

double Flux::secant(double u, double v) const {
  if (v <= 0.0) return slope(u, 0.0);
  if (v >= saturation(u)) return 0.0;
  const double s = inverse(u, v);
  if (s <= 0.0) return slope(u, 0.0);
  return v / s;
}

// ------------------------------------------------- PiecewisePolynomial

PiecewisePolynomial::PiecewisePolynomial(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {
  if (pieces_.empty()) throw Error(ErrorCode::invalid_argument, "piecewise polynomial needs a piece");
  std::sort(pieces_.begin(), pieces_.end(), [](const Piece& a, const Piece& b) { return a.lo < b.lo; });
  if (pieces_.front().lo > 0.0 || pieces_.back().hi < 1.0) {
    throw Error(ErrorCode::invalid_argument, "pieces must cover [0, 1]");
  }
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (!(pieces_[i].hi > pieces_[i].lo)) {
      throw Error(ErrorCode::invalid_argument, "empty polynomial piece");
    }
    if (i > 0 && std::abs(pieces_[i].lo - pieces_[i - 1].hi) > 1e-14) {
      throw Error(ErrorCode::invalid_argument, "polynomial pieces must be contiguous");
    }
  }
}

PiecewisePolynomial PiecewisePolynomial::constant(double c) { return polynomial({c}); }

PiecewisePolynomial PiecewisePolynomial::polynomial(std::vector<double> coeffs, double origin) {
  Piece p;
  p.lo = 0.0;
  p.hi = 1.0;
  p.terms.push_back({origin, std::move(coeffs)});
  return PiecewisePolynomial({p});
}

const PiecewisePolynomial::Piece& PiecewisePolynomial::piece_at(double u) const {
  // last piece whose lower end is <= u; pieces are half-open except the last
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), u,
                             [](double x, const Piece& p) { return x < p.lo; });
  if (it == pieces_.begin()) return pieces_.front();
  return *(it - 1);
}

double PiecewisePolynomial::eval(double u, int order) const {
  const Piece& p = piece_at(u);
  double total = 0.0;
  for (const Term& t : p.terms) {
    const double x = u - t.origin;
    // Horner on the order-th derivative
    double acc = 0.0;
    for (std::size_t k = t.coeffs.size(); k-- > static_cast<std::size_t>(order);) {
      double c = t.coeffs[k];
      for (int j = 0; j < order; ++j) c *= static_cast<double>(k - static_cast<std::size_t>(j));
      acc = acc * x + c;
    }
    total += acc;
  }
  return total;
}

double PiecewisePolynomial::value(double u) const { return eval(u, 0); }
double PiecewisePolynomial::derivative(double u) const { return eval(u, 1); }
double PiecewisePolynomial::second_derivative(double u) const { return eval(u, 2); }

PiecewisePolynomial PiecewisePolynomial::operator+(const PiecewisePolynomial& other) const {
  std::vector<double> cuts;
  for (const auto& p : pieces_) cuts.push_back(p.lo);
  for (const auto& p : other.pieces_) cuts.push_back(p.lo);
  cuts.push_back(1.0);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<Piece> merged;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    Piece p;
    p.lo = cuts[i];
    p.hi = cuts[i + 1];
    for (const auto& t : piece_at(mid).terms) p.terms.push_back(t);
    for (const auto& t : other.piece_at(mid).terms) p.terms.push_back(t);
    merged.push_back(std::move(p));
  }
  return PiecewisePolynomial(std::move(merged));
}

PiecewisePolynomial PiecewisePolynomial::scaled(double factor) const {
  auto pieces = pieces_;
  for (auto& p : pieces) {
    for (auto& t : p.terms) {
      for (auto& c : t.coeffs) c *= factor;
    }
  }
  return PiecewisePolynomial(std::move(pieces));
}

std::vector<Interval> PiecewisePolynomial::zero_intervals() const {
  std::vector<Interval> out;
  for (const auto& p : pieces_) {
    bool zero = true;
    for (const auto& t : p.terms) {
      for (double c : t.coeffs) zero = zero && c == 0.0;
    }
    if (!zero) continue;
    if (!out.empty() && std::abs(out.back().hi - p.lo) <= 1e-14) {
      out.back().hi = p.hi;
    } else {
      out.push_back({p.lo, p.hi});
    }
  }
  return out;
}

// ------------------------------------------------------------- Limiter

Limiter Limiter::ratio(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw Error(ErrorCode::invalid_argument, "ratio limiter exponent must be >= 1");
  }
  return Limiter(Kind::ratio_p, p);
}

Limiter Limiter::arctangent() { return Limiter(Kind::atan, 0.0); }

double Limiter::value(double s) const {
  if (kind_ == Kind::atan) return 2.0 / std::numbers::pi * std::atan(s);
  const double a = std::abs(s);
  if (a <= 1.0) return s / std::pow(1.0 + std::pow(a, p_), 1.0 / p_);
  // s / (|s| (1 + |s|^-p)^(1/p)) avoids overflow for huge s
  return std::copysign(1.0, s) / std::pow(1.0 + std::pow(a, -p_), 1.0 / p_);
}

double Limiter::derivative(double s) const {
  if (kind_ == Kind::atan) return 2.0 / std::numbers::pi / (1.0 + s * s);
  const double a = std::abs(s);
  if (a <= 1.0) return std::pow(1.0 + std::pow(a, p_), -1.0 / p_ - 1.0);
  return std::pow(a, -(p_ + 1.0)) * std::pow(1.0 + std::pow(a, -p_), -1.0 / p_ - 1.0);
}

double Limiter::inverse(double v) const {
  if (std::abs(v) >= 1.0) throw Error(ErrorCode::saturated, "limiter value outside (-1, 1)");
  if (kind_ == Kind::atan) return std::tan(std::numbers::pi * v / 2.0);
  return v / std::pow(1.0 - std::pow(std::abs(v), p_), 1.0 / p_);
}

double Limiter::secant(double v) const {
  const double a = std::abs(v);
  if (a >= 1.0) return 0.0;
  if (kind_ == Kind::atan) {
    if (a < 1e-8) return 2.0 / std::numbers::pi;
    return a / std::tan(std::numbers::pi * a / 2.0);
  }
  return std::pow(1.0 - std::pow(a, p_), 1.0 / p_);
}

std::string Limiter::name() const {
  if (kind_ == Kind::atan) return "atan";
  std::ostringstream os;
  os << "ratio_p(" << p_ << ")";
  return os.str();
}

// ------------------------------------------------------ builtin fluxes

namespace {

class LinearFlux final : public Flux {
 public:
  explicit LinearFlux(double d) : d_(d) {}
  FluxKind kind() const override { return FluxKind::linear; }
  std::string name() const override {
    std::ostringstream os;
    os << "linear(d=" << d_ << ")";
    return os.str();
  }
  double value(double, double s) const override { return d_ * s; }
  double slope(double, double) const override { return d_; }
  double saturation(double) const override { return kInfinity; }
  double inverse(double, double v) const override { return v / d_; }
  double secant(double, double) const override { return d_; }
  std::optional<std::vector<Interval>> exact_degenerate_levels() const override {
    return std::vector<Interval>{};
  }

 private:
  double d_;
};

class SeparableFlux final : public Flux {
 public:
  SeparableFlux(PiecewisePolynomial D, Limiter phi, FluxKind kind, std::string label)
      : D_(std::move(D)), phi_(phi), kind_(kind), label_(std::move(label)) {}
  FluxKind kind() const override { return kind_; }
  std::string name() const override {
    if (!label_.empty()) return label_;
    return "separable(" + phi_.name() + ")";
  }
  double value(double u, double s) const override { return D_.value(u) * phi_.value(s); }
  double slope(double u, double s) const override { return D_.value(u) * phi_.derivative(s); }
  double saturation(double u) const override { return std::max(D_.value(u), 0.0); }
  double inverse(double u, double v) const override {
    if (v <= 0.0) return 0.0;
    const double d = D_.value(u);
    if (d <= 0.0) throw Error(ErrorCode::degenerate, "zero diffusivity level");
    return phi_.inverse(v / d);
  }
  double secant(double u, double v) const override {
    const double d = D_.value(u);
    if (d <= 0.0) return 0.0;
    return d * phi_.secant(v / d);
  }
  std::optional<std::vector<Interval>> exact_degenerate_levels() const override {
    return D_.zero_intervals();
  }

 private:
  PiecewisePolynomial D_;
  Limiter phi_;
  FluxKind kind_;
  std::string label_;
};

class ViscousFlux final : public Flux {
 public:
  ViscousFlux(std::shared_ptr<const Flux> base, double eps) : base_(std::move(base)), eps_(eps) {}
  FluxKind kind() const override { return FluxKind::viscosity_wrapped; }
  std::string name() const override {
    std::ostringstream os;
    os << base_->name() << "+eps(" << eps_ << ")";
    return os.str();
  }
  double value(double u, double s) const override { return base_->value(u, s) + eps_ * s; }
  double slope(double u, double s) const override { return base_->slope(u, s) + eps_; }
  double saturation(double) const override { return kInfinity; }
  double domain_bound(double u) const override { return base_->domain_bound(u); }
  double inverse(double u, double v) const override {
    if (v <= 0.0) return 0.0;
    // a >= 0 for s >= 0, so a^eps(v/eps) >= v
    double hi = v / eps_;
    const double omega = base_->domain_bound(u);
    if (std::isfinite(omega)) hi = std::min(hi, omega * (1.0 - 1e-14));
    const double b0 = base_->slope(u, 0.0) + eps_;
    double lo = std::min(v / b0, hi);
    double f_lo = value(u, lo) - v;
    if (f_lo > 0.0) lo = 0.0, f_lo = -v;
    numerics::RootOptions opts;
    opts.f_tol = 1e-14 * std::max(1.0, v);
    return numerics::solve_increasing([&](double s) { return value(u, s) - v; }, lo, hi, f_lo,
                                      value(u, hi) - v, opts);
  }
  std::optional<std::vector<Interval>> exact_degenerate_levels() const override {
    return std::vector<Interval>{};
  }

 private:
  std::shared_ptr<const Flux> base_;
  double eps_;
};

class TabulatedFlux final : public Flux {
 public:
  TabulatedFlux(std::vector<double> u, std::vector<double> s, std::vector<std::vector<double>> a,
                std::vector<double> sat)
      : u_(std::move(u)), s_(std::move(s)) {
    if (u_.size() < 2 || s_.size() < 2) {
      throw Error(ErrorCode::parse_error, "tabulated flux needs at least 2 knots per axis");
    }
    if (u_.front() < 0.0 || u_.back() > 1.0 || !std::is_sorted(u_.begin(), u_.end())) {
      throw Error(ErrorCode::parse_error, "u knots must be sorted inside [0, 1]");
    }
    if (s_.front() != 0.0 || !std::is_sorted(s_.begin(), s_.end())) {
      throw Error(ErrorCode::parse_error, "s knots must be sorted and start at 0");
    }
    if (a.size() != u_.size()) throw Error(ErrorCode::parse_error, "values need one row per u knot");
    for (const auto& row : a) {
      if (row.size() != s_.size()) throw Error(ErrorCode::parse_error, "values row length mismatch");
      if (row.front() != 0.0) throw Error(ErrorCode::parse_error, "a(u, 0) must be 0");
      for (std::size_t j = 1; j < row.size(); ++j) {
        if (row[j] < row[j - 1]) throw Error(ErrorCode::parse_error, "values must be nondecreasing in s");
      }
    }
    for (std::size_t j = 0; j < s_.size(); ++j) {
      std::vector<double> col(u_.size());
      for (std::size_t i = 0; i < u_.size(); ++i) col[i] = a[i][j];
      columns_.emplace_back(u_, std::move(col));
    }
    if (!sat.empty()) {
      if (sat.size() != u_.size()) throw Error(ErrorCode::parse_error, "saturation needs one value per u knot");
      for (std::size_t i = 0; i < u_.size(); ++i) {
        if (sat[i] < a[i].back()) throw Error(ErrorCode::parse_error, "saturation below tabulated values");
      }
      saturation_ = numerics::MonotoneCubic(u_, std::move(sat));
      bounded_ = true;
    }
  }

  FluxKind kind() const override { return FluxKind::custom; }
  std::string name() const override { return "tabulated"; }

  double value(double u, double s) const override {
    return std::copysign(positive(u, std::abs(s)).value, s);
  }
  double slope(double u, double s) const override { return positive(u, std::abs(s)).derivative; }
  double saturation(double u) const override {
    if (!bounded_) return kInfinity;
    return std::max(saturation_.value(clamp_u(u)), 0.0);
  }

 private:
  double clamp_u(double u) const { return std::clamp(u, u_.front(), u_.back()); }

  numerics::Hermite positive(double u, double s) const {
    const double uc = clamp_u(u);
    std::vector<double> col(s_.size());
    for (std::size_t j = 0; j < s_.size(); ++j) col[j] = std::max(columns_[j].value(uc), 0.0);
    // keep the column monotone in s after interpolation across u
    for (std::size_t j = 1; j < col.size(); ++j) col[j] = std::max(col[j], col[j - 1]);
    if (s <= s_.back()) {
      numerics::MonotoneCubic in_s(s_, col);
      return {in_s.value(s), in_s.derivative(s)};
    }
    numerics::MonotoneCubic in_s(s_, col);
    const double c_last = col.back();
    const double d_last = in_s.derivative(s_.back());
    const double ds = s - s_.back();
    if (bounded_) {
      const double gap = saturation(u) - c_last;
      if (gap <= 0.0 || d_last <= 0.0) return {c_last, 0.0};
      const double k = d_last / gap;
      const double e = std::exp(-k * ds);
      return {c_last + gap * (1.0 - e), d_last * e};
    }
    return {c_last + d_last * ds, d_last};
  }

  std::vector<double> u_, s_;
  std::vector<numerics::MonotoneCubic> columns_;
  numerics::MonotoneCubic saturation_;
  bool bounded_ = false;
};

std::vector<Interval> sample_degenerate(const Flux& f) {
  constexpr int n = 1024;
  const std::vector<double> probes = {1e-3, 1e-1, 1.0, 10.0, 1e3};
  std::vector<Interval> out;
  bool open = false;
  double start = 0.0, last = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double u = static_cast<double>(i) / n;
    const double omega = f.domain_bound(u);
    double peak = 0.0;
    for (double s : probes) {
      const double ss = std::isfinite(omega) ? std::min(s, 0.5 * omega) : s;
      peak = std::max(peak, std::abs(f.value(u, ss)));
    }
    const bool degenerate = peak < kDegenerateTolerance;
    if (degenerate && !open) {
      open = true;
      start = u;
    }
    if (!degenerate && open) {
      out.push_back({start, last});
      open = false;
    }
    last = u;
  }
  if (open) out.push_back({start, 1.0});
  return out;
}

}  // namespace

// ----------------------------------------------------------- FluxModel

FluxModel::FluxModel(std::shared_ptr<const Flux> impl) : impl_(std::move(impl)) {
  if (!impl_) throw Error(ErrorCode::invalid_argument, "null flux");
  if (auto exact = impl_->exact_degenerate_levels()) {
    degenerate_ = std::move(*exact);
  } else {
    degenerate_ = sample_degenerate(*impl_);
  }
}

FluxModel FluxModel::linear(double d) {
  if (!(d > 0.0) || !std::isfinite(d)) throw Error(ErrorCode::invalid_argument, "linear flux needs d > 0");
  return FluxModel(std::make_shared<LinearFlux>(d));
}

FluxModel FluxModel::separable(PiecewisePolynomial diffusivity, Limiter limiter, FluxKind kind,
                               std::string label) {
  return FluxModel(
      std::make_shared<SeparableFlux>(std::move(diffusivity), limiter, kind, std::move(label)));
}

FluxModel FluxModel::tabulated(std::vector<double> u_knots, std::vector<double> s_knots,
                               std::vector<std::vector<double>> values, std::vector<double> saturation) {
  return FluxModel(std::make_shared<TabulatedFlux>(std::move(u_knots), std::move(s_knots),
                                                   std::move(values), std::move(saturation)));
}

bool FluxModel::is_degenerate(double u) const {
  for (const auto& iv : degenerate_) {
    if (iv.contains(u)) return true;
  }
  return false;
}

double FluxModel::eval(double u, double s) const {
  if (std::abs(s) >= impl_->domain_bound(u)) {
    throw Error(ErrorCode::domain_violation, "gradient outside the flux domain");
  }
  return impl_->value(u, s);
}

double FluxModel::invert(double u, double v) const {
  if (v < 0.0) return -invert(u, -v);
  if (v == 0.0) return 0.0;
  if (is_degenerate(u)) throw Error(ErrorCode::degenerate, "level is totally degenerate");
  if (v >= impl_->saturation(u)) throw Error(ErrorCode::saturated, "flow value at or above a_plus");
  return impl_->inverse(u, v);
}

double FluxModel::h_reciprocal(double u, double V) const {
  if (V <= 0.0) return 0.0;
  if (is_degenerate(u) || V >= impl_->saturation(u)) return 0.0;
  return impl_->secant(u, V) / V;
}

double eval_flux(const FluxModel& m, double u, double s) { return m.eval(u, s); }
double invert_flux(const FluxModel& m, double u, double v) { return m.invert(u, v); }
double h_reciprocal(const FluxModel& m, double u, double V) { return m.h_reciprocal(u, V); }

FluxModel with_viscosity(const FluxModel& m, double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw Error(ErrorCode::invalid_argument, "viscosity coefficient must be positive");
  }
  return FluxModel(std::make_shared<ViscousFlux>(m.shared(), eps));
}

}  // namespace frontspeed
