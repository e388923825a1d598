#include <cmath>
#include <numbers>

#include "doctest.h"
#include "frontspeed/classify.hpp"
#include "frontspeed/errors.hpp"
#include "frontspeed/model.hpp"

using namespace frontspeed;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an exception");
  return ErrorCode::invalid_argument;
}

}  // namespace

TEST_CASE("ratio limiter matches its closed form") {
  const auto phi = Limiter::ratio(2.0);
  for (double s : {-5.0, -0.3, 0.0, 0.7, 12.0}) {
    CHECK(phi.value(s) == doctest::Approx(s / std::sqrt(1.0 + s * s)).epsilon(1e-14));
    CHECK(phi.inverse(phi.value(s)) == doctest::Approx(s).epsilon(1e-10));
  }
  CHECK(phi.slope_at_zero() == doctest::Approx(1.0));
  CHECK(phi.secant(0.0) == doctest::Approx(1.0));
}

TEST_CASE("atan limiter") {
  const auto phi = Limiter::arctangent();
  CHECK(phi.value(1.0) == doctest::Approx(0.5));
  CHECK(phi.slope_at_zero() == doctest::Approx(2.0 / std::numbers::pi));
  CHECK(phi.inverse(0.5) == doctest::Approx(1.0));
}

TEST_CASE("linear flux round trip and oddness") {
  const auto m = FluxModel::linear(2.0);
  CHECK(m.eval(0.3, 1.5) == doctest::Approx(3.0));
  CHECK(m.eval(0.3, -1.5) == doctest::Approx(-3.0));
  CHECK(m.invert(0.3, 3.0) == doctest::Approx(1.5));
  CHECK(std::isinf(m.a_plus(0.5)));
  CHECK(m.h_reciprocal(0.5, 4.0) == doctest::Approx(0.5));
}

TEST_CASE("separable flux saturates at D(u)") {
  const auto D = PiecewisePolynomial::polynomial({0.1, 0.0, 4.0});
  const auto m = FluxModel::separable(D, Limiter::ratio(2.0));
  CHECK(m.a_plus(0.5) == doctest::Approx(1.1));
  CHECK(m.invert(0.5, 0.55) == doctest::Approx(0.5 / std::sqrt(0.75)).epsilon(1e-10));
  CHECK(code_of([&] { m.invert(0.5, 1.2); }) == ErrorCode::saturated);
  CHECK(m.h_reciprocal(0.5, 1.2) == 0.0);
}

TEST_CASE("piecewise polynomial zero set") {
  PiecewisePolynomial p({{0.0, 0.3, {{0.3, {0.0, 0.0, 1.0}}}}, {0.3, 0.6, {}}, {0.6, 1.0, {{0.6, {0.0, 0.0, 2.0}}}}});
  CHECK(p.value(0.1) == doctest::Approx(0.04));
  CHECK(p.value(0.8) == doctest::Approx(0.08));
  CHECK(p.derivative(0.8) == doctest::Approx(0.8));
  const auto z = p.zero_intervals();
  REQUIRE(z.size() == 1);
  CHECK(z[0].lo == doctest::Approx(0.3));
  CHECK(z[0].hi == doctest::Approx(0.6));
}

TEST_CASE("viscosity wrapper adds eps s") {
  const auto base = FluxModel::separable(PiecewisePolynomial::constant(0.5), Limiter::ratio(2.0));
  const auto m = with_viscosity(base, 0.1);
  CHECK(m.eval(0.4, 2.0) == doctest::Approx(base.eval(0.4, 2.0) + 0.2));
  CHECK(std::isinf(m.a_plus(0.4)));
  CHECK(m.invert(0.4, m.eval(0.4, 3.0)) == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("reaction hypotheses") {
  const auto f = ReactionModel::logistic(2.0);
  CHECK(f(0.5) == doctest::Approx(0.5));
  CHECK(f.df0() == doctest::Approx(2.0));
  CHECK(f.df1() == doctest::Approx(-2.0));
  f.validate();

  const auto cubic = ReactionModel::polynomial({0.0, 1.0, 0.0, -1.0});
  CHECK(cubic.df0() == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(cubic.df1() == doctest::Approx(-2.0).epsilon(1e-8));

  const auto bad = ReactionModel::polynomial({0.1, 1.0, -1.1});
  CHECK_THROWS_AS(bad.validate(), HypothesisViolation);
}

TEST_CASE("gamma0 and the lower speed bound") {
  const auto m = FluxModel::linear(4.0);
  const auto r = ReactionModel::logistic(0.25);
  CHECK(gamma0(m, r) == doctest::Approx(1.0));
  CHECK(lower_speed_bound(m, r) == doctest::Approx(2.0));

  const auto sep = FluxModel::separable(PiecewisePolynomial::constant(0.3), Limiter::arctangent());
  CHECK(lower_speed_bound(sep, ReactionModel::logistic(1.0)) ==
        doctest::Approx(2.0 * std::sqrt(0.3 * 2.0 / std::numbers::pi)));
}

TEST_CASE("classification flags") {
  const auto fisher = classify_flux(FluxModel::linear(1.0));
  CHECK(fisher.a_plus_infinite);
  CHECK(fisher.over_elliptic.has_value());
  CHECK_FALSE(fisher.ultra_degenerate);

  const auto bounded = load_preset("bounded");
  CHECK_FALSE(bounded.classification.a_plus_infinite);
  CHECK_FALSE(bounded.classification.over_elliptic.has_value());

  const auto ex3 = load_preset("example3");
  CHECK(ex3.classification.ultra_degenerate);
  REQUIRE(ex3.classification.L_td.size() == 1);
  CHECK(ex3.classification.L_td[0].lo == doctest::Approx(0.3).epsilon(1e-3));
  CHECK(ex3.classification.L_td[0].hi == doctest::Approx(0.6).epsilon(1e-3));
}

TEST_CASE("presets and overrides") {
  const auto lm = load_preset("fisher", {{"d", 4.0}, {"k", 0.25}});
  CHECK(lower_speed_bound(lm.flux, lm.reaction) == doctest::Approx(2.0));
  CHECK(is_preset("example4"));
  CHECK_FALSE(is_preset("example5"));
  CHECK(code_of([] { load_preset("nope"); }) == ErrorCode::parse_error);
  CHECK(code_of([] { load_preset("fisher", {{"c1", 1.0}}); }) == ErrorCode::parse_error);
  CHECK(code_of([] { load_model("{\"flux\": 3"); }) == ErrorCode::parse_error);
}

TEST_CASE("json config") {
  const auto lm = load_model(R"({"flux": {"kind": "linear", "d": 0.5}, "reaction": {"kind": "logistic", "k": 2}})");
  CHECK(lower_speed_bound(lm.flux, lm.reaction) == doctest::Approx(2.0));
  CHECK(lm.preset.empty());
}
