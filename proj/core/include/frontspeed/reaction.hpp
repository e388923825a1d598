#pragma once

#include <functional>
#include <string>
#include <vector>

namespace frontspeed {

/// Logistic-type reaction f on [0, 1] with endpoint derivatives.
class ReactionModel {
 public:
  using Function = std::function<double(double)>;

  /// f(u) = k u (1 - u)
  static ReactionModel logistic(double k);
  /// f(u) = sum_i c_i u^i; derivatives at the ends by finite differences.
  static ReactionModel polynomial(std::vector<double> coeffs);
  static ReactionModel custom(Function f, std::string name);

  ReactionModel(Function f, double df0, double df1, std::string name);

  double operator()(double u) const { return logistic_ ? k_ * u * (1.0 - u) : f_(u); }
  double df0() const { return df0_; }
  double df1() const { return df1_; }
  const std::string& name() const { return name_; }

  /// Throws HypothesisViolation("l") unless f(0) = f(1) = 0 and f > 0 inside,
  /// checked on `samples` interior points.
  void validate(int samples = 1000) const;

 private:
  ReactionModel() = default;

  Function f_;
  bool logistic_ = false;
  double k_ = 0.0;
  double df0_ = 0.0;
  double df1_ = 0.0;
  std::string name_;
};

/// Fourth-order one-sided differences at u = 0 and u = 1.
double forward_derivative(const ReactionModel::Function& f, double h = 1e-4);
double backward_derivative(const ReactionModel::Function& f, double h = 1e-4);

}  // namespace frontspeed
