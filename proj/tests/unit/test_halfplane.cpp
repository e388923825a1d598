#include <cmath>
#include <functional>

#include "doctest.h"
#include "frontspeed/halfplane.hpp"
#include "frontspeed/model.hpp"

using namespace frontspeed;

namespace {

// Classic RK4 on dV/du = sigma - f(u) / g(u, V), marching down from just
// below u = 1 with the linearized start V = m (1 - u), where m solves
// m^2 + sigma m - k a_s(1, 0) = 0. No adaptivity, no dense output.
struct Rk4Oracle {
  std::function<double(double, double)> rhs;
  double start_slope = 0.0;

  double at(double target, double delta = 1e-7, int steps = 1'000'000) const {
    double u = 1.0 - delta;
    double V = start_slope * delta;
    const double h = (u - target) / steps;
    for (int i = 0; i < steps; ++i) {
      const double k1 = rhs(u, V);
      const double k2 = rhs(u - 0.5 * h, V - 0.5 * h * k1);
      const double k3 = rhs(u - 0.5 * h, V - 0.5 * h * k2);
      const double k4 = rhs(u - h, V - h * k3);
      V -= h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
      u -= h;
    }
    return V;
  }
};

double linear_start(double sigma, double k, double a_s1) {
  return 0.5 * (-sigma + std::sqrt(sigma * sigma + 4.0 * k * a_s1));
}

}  // namespace

TEST_CASE("closed-form separatrix of the logistic equation") {
  // For d = k = 1 and sigma = 5/sqrt(6) the wave is (1 + e^{-x/sqrt6})^{-2},
  // so V(u) = sqrt(2/3) u (1 - sqrt(u)).
  const auto m = FluxModel::linear(1.0);
  const auto r = ReactionModel::logistic(1.0);
  const double sigma = 5.0 / std::sqrt(6.0);
  const auto sol = integrate_halfplane(m, r, sigma, SolveMode::extended);
  REQUIRE(sol.reached_terminal);
  double worst = 0.0;
  for (double u = 0.01; u < 0.995; u += 0.01) {
    worst = std::max(worst, std::abs(sol.V_at(u) - std::sqrt(2.0 / 3.0) * u * (1.0 - std::sqrt(u))));
  }
  CHECK(worst < 1e-8);
  const auto w = slope_at_zero(sol);
  REQUIRE(w);
  // V/u = sqrt(2/3) (1 - sqrt(u)) still carries a ~1% correction in the fit decade
  CHECK(w->w == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(0.02));
  CHECK(vanishes_at_zero(sol));
}

TEST_CASE("fixed-step RK4 oracle, separable bounded flux") {
  const auto D = PiecewisePolynomial::polynomial({0.1, 0.0, 4.0});
  const auto m = FluxModel::separable(D, Limiter::ratio(2.0));
  const auto r = ReactionModel::logistic(1.0);
  const double sigma = 1.5;
  Rk4Oracle oracle;
  oracle.rhs = [&](double u, double V) {
    const double d = 0.1 + 4.0 * u * u;
    const double v = V / d;
    const double g = v / std::sqrt(1.0 - v * v);
    return sigma - u * (1.0 - u) / g;
  };
  oracle.start_slope = linear_start(sigma, 1.0, 4.1);
  const auto sol = integrate_halfplane(m, r, sigma, SolveMode::classic);
  for (double u : {0.8, 0.5, 0.2}) {
    CAPTURE(u);
    CHECK(sol.V_at(u) == doctest::Approx(oracle.at(u)).epsilon(1e-6));
  }
}

TEST_CASE("fixed-step RK4 oracle, linear flux above the minimal speed") {
  const auto m = FluxModel::linear(0.5);
  const auto r = ReactionModel::logistic(2.0);
  const double sigma = 2.4;
  Rk4Oracle oracle;
  oracle.rhs = [&](double u, double V) { return sigma - 2.0 * u * (1.0 - u) * 0.5 / V; };
  oracle.start_slope = linear_start(sigma, 2.0, 0.5);
  const auto sol = integrate_halfplane(m, r, sigma, SolveMode::extended);
  for (double u : {0.9, 0.6, 0.3, 0.1}) {
    CAPTURE(u);
    CHECK(sol.V_at(u) == doctest::Approx(oracle.at(u)).epsilon(1e-6));
  }
}

TEST_CASE("offset start agrees with the series start") {
  const auto lm = load_preset("bounded");
  const double sigma = 1.2;
  const auto base = integrate_halfplane(lm.flux, lm.reaction, sigma, SolveMode::extended);
  const double start = 0.999;
  const double rho = std::sqrt(base.R_at(start));
  const auto shifted = integrate_halfplane_from(lm.flux, lm.reaction, sigma, SolveMode::extended, start, rho);
  for (double u : {0.9, 0.5, 0.1, 0.01}) {
    CAPTURE(u);
    CHECK(shifted.V_at(u) == doctest::Approx(base.V_at(u)).epsilon(1e-7));
  }
}

TEST_CASE("Hermite dense output reproduces node derivatives") {
  const auto m = FluxModel::linear(1.0);
  const auto r = ReactionModel::logistic(1.0);
  const auto sol = integrate_halfplane(m, r, 2.5, SolveMode::extended);
  REQUIRE(sol.u.size() > 10);
  const std::size_t i = sol.u.size() / 2;
  const double u = sol.u[i];
  const double dV = sol.dV_at(u);
  CHECK(dV == doctest::Approx(2.5 - u * (1.0 - u) / sol.V_at(u)).epsilon(1e-6));
}

TEST_CASE("solutions are ordered in sigma") {
  const auto lm = load_preset("bounded");
  const auto low = integrate_halfplane(lm.flux, lm.reaction, 0.8, SolveMode::extended);
  const auto high = integrate_halfplane(lm.flux, lm.reaction, 1.4, SolveMode::extended);
  const auto rep = compare_speed_solutions(low, high);
  CHECK(rep.pass);
  CHECK(rep.points > 10);
  // swapped roles must report a violation
  CHECK_FALSE(compare_speed_solutions(high, low).pass);
}

TEST_CASE("slow speed does not vanish at zero") {
  const auto m = FluxModel::linear(1.0);
  const auto r = ReactionModel::logistic(1.0);
  const auto sol = integrate_halfplane(m, r, 1.5, SolveMode::extended);
  CHECK_FALSE(vanishes_at_zero(sol));
}

TEST_CASE("extended mode flags saturated spans") {
  const auto lm = load_preset("bounded");
  const auto sol = integrate_halfplane(lm.flux, lm.reaction, 0.3, SolveMode::extended);
  CHECK_FALSE(sol.saturated_spans.empty());
  for (const auto& span : sol.saturated_spans) {
    const double mid = 0.5 * (span.lo + span.hi);
    CHECK(sol.in_saturated_span(mid));
    CHECK(sol.dV_at(mid) == doctest::Approx(0.3));
  }
}
