#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace frontspeed {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Closed level interval [lo, hi] inside [0, 1].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double u) const { return u >= lo && u <= hi; }
  double width() const { return hi - lo; }
};

enum class FluxKind { linear, separable, piecewise, viscosity_wrapped, custom };

std::string to_string(FluxKind kind);

/// A flux a(u, s): odd and nondecreasing in the gradient s, defined for
/// |s| < omega_plus(u). Implementations are immutable and thread-safe.
class Flux {
 public:
  virtual ~Flux() = default;

  virtual FluxKind kind() const = 0;
  virtual std::string name() const = 0;

  virtual double value(double u, double s) const = 0;
  /// Partial derivative in s.
  virtual double slope(double u, double s) const = 0;
  /// a_plus(u): supremum of a(u, .), possibly +infinity.
  virtual double saturation(double u) const = 0;
  /// omega_plus(u): bound of the gradient domain, possibly +infinity.
  virtual double domain_bound(double u) const;

  /// The s >= 0 with a(u, s) = v, for 0 <= v < saturation(u). The default
  /// grows a bracket geometrically and runs a safeguarded secant search.
  virtual double inverse(double u, double v) const;

  /// v / g(u, v) with g the inverse above; continuous down to v = 0 where
  /// it equals slope(u, 0), and tending to 0 as v approaches a_plus(u).
  virtual double secant(double u, double v) const;

  /// Totally degenerate levels when known in closed form.
  virtual std::optional<std::vector<Interval>> exact_degenerate_levels() const { return std::nullopt; }
};

/// Piecewise polynomial on [0, 1]; each piece is a sum of polynomials in
/// (u - origin). Used for the diffusion factor D(u) of separable fluxes.
class PiecewisePolynomial {
 public:
  struct Term {
    double origin = 0.0;
    std::vector<double> coeffs;  // sum_k coeffs[k] * (u - origin)^k
  };
  struct Piece {
    double lo = 0.0;
    double hi = 1.0;
    std::vector<Term> terms;
  };

  PiecewisePolynomial() = default;
  explicit PiecewisePolynomial(std::vector<Piece> pieces);

  static PiecewisePolynomial constant(double c);
  static PiecewisePolynomial polynomial(std::vector<double> coeffs, double origin = 0.0);

  double value(double u) const;
  double derivative(double u) const;
  double second_derivative(double u) const;

  PiecewisePolynomial operator+(const PiecewisePolynomial& other) const;
  PiecewisePolynomial scaled(double factor) const;

  /// Maximal unions of pieces whose terms vanish identically.
  std::vector<Interval> zero_intervals() const;
  const std::vector<Piece>& pieces() const { return pieces_; }

 private:
  const Piece& piece_at(double u) const;
  double eval(double u, int order) const;

  std::vector<Piece> pieces_;
};

/// Bounded limiter phi: R -> (-1, 1), odd, increasing, phi(+-inf) = +-1.
class Limiter {
 public:
  enum class Kind { ratio_p, atan };

  /// phi(s) = s / (1 + |s|^p)^(1/p)
  static Limiter ratio(double p);
  /// phi(s) = (2/pi) atan(s)
  static Limiter arctangent();

  Kind kind() const { return kind_; }
  double exponent() const { return p_; }
  double value(double s) const;
  double derivative(double s) const;
  double inverse(double v) const;
  /// v / phi^{-1}(v) for |v| < 1, continuous at 0.
  double secant(double v) const;
  double slope_at_zero() const { return derivative(0.0); }
  std::string name() const;

 private:
  Limiter(Kind kind, double p) : kind_(kind), p_(p) {}
  Kind kind_;
  double p_;
};

/// Immutable handle on a flux plus its totally degenerate level set.
class FluxModel {
 public:
  explicit FluxModel(std::shared_ptr<const Flux> impl);

  static FluxModel linear(double d);
  static FluxModel separable(PiecewisePolynomial diffusivity, Limiter limiter,
                             FluxKind kind = FluxKind::separable, std::string label = {});
  static FluxModel tabulated(std::vector<double> u_knots, std::vector<double> s_knots,
                             std::vector<std::vector<double>> values,
                             std::vector<double> saturation = {});

  /// a(u, s); throws DomainViolation when |s| >= omega_plus(u).
  double eval(double u, double s) const;
  /// g(u, v); throws Saturated for v >= a_plus(u) and Degenerate on L_td.
  double invert(double u, double v) const;
  /// 1/g(u, V) below the saturation curve, exactly 0 at or above it.
  double h_reciprocal(double u, double V) const;

  double da_ds(double u, double s) const { return impl_->slope(u, s); }
  double a_plus(double u) const { return impl_->saturation(u); }
  double omega_plus(double u) const { return impl_->domain_bound(u); }
  double secant(double u, double v) const { return impl_->secant(u, v); }

  const std::vector<Interval>& degenerate_levels() const { return degenerate_; }
  bool is_degenerate(double u) const;

  FluxKind kind() const { return impl_->kind(); }
  std::string name() const { return impl_->name(); }
  const Flux& impl() const { return *impl_; }
  std::shared_ptr<const Flux> shared() const { return impl_; }

 private:
  std::shared_ptr<const Flux> impl_;
  std::vector<Interval> degenerate_;
};

/// Largest |a(u, s)| below which a sampled level counts as totally degenerate.
inline constexpr double kDegenerateTolerance = 1e-10;

double eval_flux(const FluxModel& m, double u, double s);
double invert_flux(const FluxModel& m, double u, double v);
double h_reciprocal(const FluxModel& m, double u, double V);

/// a^eps(u, s) = a(u, s) + eps s.
FluxModel with_viscosity(const FluxModel& m, double eps);

}  // namespace frontspeed
