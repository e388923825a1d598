#pragma once

// Small numerical kernels shared by the solver modules: bracketed monotone
// root finding, monotone cubic interpolation, cubic Hermite evaluation,
// Gauss-Legendre weights and a least-squares line fit.

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace frontspeed::numerics {

struct RootOptions {
  double x_tol = 0.0;  // absolute bracket width; 0 means "to rounding"
  double f_tol = 0.0;  // accept |f| <= f_tol
  int max_iter = 300;
};

/// Root of an increasing function on [lo, hi] with f(lo) <= 0 <= f(hi).
/// Illinois-modified regula falsi, falling back to bisection whenever the
/// bracket fails to halve over two consecutive iterations.
template <class F>
double solve_increasing(F&& f, double lo, double hi, double f_lo, double f_hi,
                        const RootOptions& opts = {}) {
  if (f_lo >= 0.0) return lo;
  if (f_hi <= 0.0) return hi;
  int side = 0;
  double width_two_ago = hi - lo;
  double width_prev = hi - lo;
  bool force_bisect = false;
  for (int it = 0; it < opts.max_iter; ++it) {
    const double width = hi - lo;
    const double scale = std::max(std::abs(lo), std::abs(hi));
    if (width <= std::max(opts.x_tol, 4.0 * std::numeric_limits<double>::epsilon() * scale) ||
        width <= std::numeric_limits<double>::min()) {
      break;
    }
    double x = lo - f_lo * width / (f_hi - f_lo);
    if (force_bisect || !(x > lo && x < hi)) x = lo + 0.5 * width;
    const double fx = f(x);
    if (fx == 0.0 || std::abs(fx) <= opts.f_tol) return x;
    if (fx < 0.0) {
      lo = x;
      f_lo = fx;
      if (side == -1) f_hi *= 0.5;
      side = -1;
    } else {
      hi = x;
      f_hi = fx;
      if (side == 1) f_lo *= 0.5;
      side = 1;
    }
    const double new_width = hi - lo;
    force_bisect = new_width > 0.5 * width_two_ago;
    width_two_ago = width_prev;
    width_prev = new_width;
  }
  return (std::abs(f_lo) < std::abs(f_hi)) ? lo : hi;
}

/// Plain bisection on a boolean predicate that is false at `lo` and true
/// at `hi`; returns the final (lo, hi) pair.
template <class P>
std::pair<double, double> bisect_predicate(P&& pred, double lo, double hi, double x_tol) {
  while (hi - lo > x_tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (pred(mid)) hi = mid; else lo = mid;
  }
  return {lo, hi};
}

/// Shape-preserving piecewise cubic (Fritsch-Carlson / Fritsch-Butland
/// slopes). Monotone data yields a monotone interpolant.
class MonotoneCubic {
 public:
  MonotoneCubic() = default;
  MonotoneCubic(std::vector<double> x, std::vector<double> y);

  double value(double x) const;
  double derivative(double x) const;
  double front() const { return x_.front(); }
  double back() const { return x_.back(); }
  std::span<const double> knots() const { return x_; }
  std::span<const double> values() const { return y_; }
  std::span<const double> slopes() const { return d_; }

 private:
  std::size_t cell(double x) const;
  std::vector<double> x_, y_, d_;
};

struct Hermite {
  double value;
  double derivative;
};

/// Cubic Hermite interpolant through (x0,y0,d0), (x1,y1,d1) evaluated at x.
inline Hermite hermite(double x0, double x1, double y0, double y1, double d0, double d1, double x) {
  const double h = x1 - x0;
  const double t = (x - x0) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  const double value = h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1;
  const double dh00 = (6 * t2 - 6 * t) / h;
  const double dh10 = 3 * t2 - 4 * t + 1;
  const double dh01 = (-6 * t2 + 6 * t) / h;
  const double dh11 = 3 * t2 - 2 * t;
  const double derivative = dh00 * y0 + dh10 * d0 + dh01 * y1 + dh11 * d1;
  return {value, derivative};
}

/// 10-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendre10 {
  static constexpr std::array<double, 10> nodes = {
      -0.9739065285171717, -0.8650633666889845, -0.6794095682990244, -0.4333953941292472,
      -0.1488743389816312, 0.1488743389816312,  0.4333953941292472,  0.6794095682990244,
      0.8650633666889845,  0.9739065285171717};
  static constexpr std::array<double, 10> weights = {
      0.0666713443086881, 0.1494513491505806, 0.2190863625159820, 0.2692667193099963,
      0.2955242247147529, 0.2955242247147529, 0.2692667193099963, 0.2190863625159820,
      0.1494513491505806, 0.0666713443086881};
};

template <class F>
double gauss_legendre(F&& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t i = 0; i < GaussLegendre10::nodes.size(); ++i) {
    sum += GaussLegendre10::weights[i] * f(mid + half * GaussLegendre10::nodes[i]);
  }
  return sum * half;
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double intercept_stderr = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace frontspeed::numerics
