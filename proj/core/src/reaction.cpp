#include <cmath>
#include <sstream>

#include "frontspeed/errors.hpp"
#include "frontspeed/model.hpp"

namespace frontspeed {

double forward_derivative(const ReactionModel::Function& f, double h) {
  return (-25.0 * f(0.0) + 48.0 * f(h) - 36.0 * f(2 * h) + 16.0 * f(3 * h) - 3.0 * f(4 * h)) /
         (12.0 * h);
}

double backward_derivative(const ReactionModel::Function& f, double h) {
  return (25.0 * f(1.0) - 48.0 * f(1.0 - h) + 36.0 * f(1.0 - 2 * h) - 16.0 * f(1.0 - 3 * h) +
          3.0 * f(1.0 - 4 * h)) /
         (12.0 * h);
}

ReactionModel::ReactionModel(Function f, double df0, double df1, std::string name)
    : f_(std::move(f)), df0_(df0), df1_(df1), name_(std::move(name)) {}

ReactionModel ReactionModel::logistic(double k) {
  if (!(k > 0.0) || !std::isfinite(k)) throw HypothesisViolation("l", "logistic rate must be positive");
  ReactionModel r;
  r.logistic_ = true;
  r.k_ = k;
  r.f_ = [k](double u) { return k * u * (1.0 - u); };
  r.df0_ = k;
  r.df1_ = -k;
  std::ostringstream os;
  os << "logistic(k=" << k << ")";
  r.name_ = os.str();
  return r;
}

ReactionModel ReactionModel::polynomial(std::vector<double> coeffs) {
  if (coeffs.empty()) throw Error(ErrorCode::parse_error, "empty reaction polynomial");
  auto f = [c = std::move(coeffs)](double u) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * u + *it;
    return acc;
  };
  return custom(std::move(f), "polynomial");
}

ReactionModel ReactionModel::custom(Function f, std::string name) {
  const double d0 = forward_derivative(f);
  const double d1 = backward_derivative(f);
  return ReactionModel(std::move(f), d0, d1, std::move(name));
}

void ReactionModel::validate(int samples) const {
  const double f0 = (*this)(0.0);
  const double f1 = (*this)(1.0);
  if (std::abs(f0) > 1e-12 || std::abs(f1) > 1e-12) {
    throw HypothesisViolation("l", "reaction must vanish at 0 and 1");
  }
  for (int i = 1; i <= samples; ++i) {
    const double u = static_cast<double>(i) / (samples + 1);
    const double v = (*this)(u);
    if (!(v > 0.0)) {
      std::ostringstream os;
      os << "reaction not positive at u=" << u << " (f=" << v << ")";
      throw HypothesisViolation("l", os.str());
    }
  }
  if (df0_ < 0.0 || df1_ > 0.0) throw HypothesisViolation("l", "endpoint derivative signs");
}

double gamma0(const FluxModel& m, const ReactionModel& r) { return m.da_ds(0.0, 0.0) * r.df0(); }

double lower_speed_bound(const FluxModel& m, const ReactionModel& r) {
  if (m.is_degenerate(0.0)) throw Error(ErrorCode::degenerate, "u = 0 is a totally degenerate level");
  return 2.0 * std::sqrt(std::max(gamma0(m, r), 0.0));
}

}  // namespace frontspeed
