#include "frontspeed/numerics.hpp"

#include <algorithm>

#include "frontspeed/errors.hpp"

namespace frontspeed::numerics {

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n) {
    throw Error(ErrorCode::invalid_argument, "monotone cubic needs >= 2 matching knots");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(x_[i] > x_[i - 1])) {
      throw Error(ErrorCode::invalid_argument, "monotone cubic knots must be strictly increasing");
    }
  }
  std::vector<double> delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) delta[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
  d_.assign(n, 0.0);
  if (n == 2) {
    d_[0] = d_[1] = delta[0];
    return;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (delta[i - 1] * delta[i] <= 0.0) {
      d_[i] = 0.0;
    } else {
      const double h0 = x_[i] - x_[i - 1];
      const double h1 = x_[i + 1] - x_[i];
      const double w1 = 2 * h1 + h0;
      const double w2 = h1 + 2 * h0;
      d_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
  }
  // one-sided three-point end slopes, clipped to keep monotonicity
  auto end_slope = [](double h0, double h1, double del0, double del1) {
    double d = ((2 * h0 + h1) * del0 - h0 * del1) / (h0 + h1);
    if (d * del0 <= 0.0) {
      d = 0.0;
    } else if (del0 * del1 <= 0.0 && std::abs(d) > 3 * std::abs(del0)) {
      d = 3 * del0;
    }
    return d;
  };
  d_[0] = end_slope(x_[1] - x_[0], x_[2] - x_[1], delta[0], delta[1]);
  d_[n - 1] = end_slope(x_[n - 1] - x_[n - 2], x_[n - 2] - x_[n - 3], delta[n - 2], delta[n - 3]);
}

std::size_t MonotoneCubic::cell(double x) const {
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t i = (it == x_.begin()) ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
  return std::min(i, x_.size() - 2);
}

double MonotoneCubic::value(double x) const {
  const std::size_t i = cell(x);
  return hermite(x_[i], x_[i + 1], y_[i], y_[i + 1], d_[i], d_[i + 1], x).value;
}

double MonotoneCubic::derivative(double x) const {
  const std::size_t i = cell(x);
  return hermite(x_[i], x_[i + 1], y_[i], y_[i + 1], d_[i], d_[i + 1], x).derivative;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) {
    throw Error(ErrorCode::invalid_argument, "line fit needs >= 2 matching samples");
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (n > 2) {
    double sse = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - (fit.intercept + fit.slope * x[i]);
      sse += r * r;
    }
    const double s2 = sse / static_cast<double>(n - 2);
    fit.slope_stderr = std::sqrt(s2 / sxx);
    fit.intercept_stderr = std::sqrt(s2 * (1.0 / static_cast<double>(n) + mx * mx / sxx));
  }
  return fit;
}

}  // namespace frontspeed::numerics
