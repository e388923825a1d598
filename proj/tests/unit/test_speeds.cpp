#include <cmath>

#include "doctest.h"
#include "frontspeed/errors.hpp"
#include "frontspeed/speeds.hpp"
#include "json.hpp"

using namespace frontspeed;

TEST_CASE("quadratic roots") {
  const auto q = quadratic_roots(2.5, 1.0);
  CHECK(q.w_minus == doctest::Approx(0.5));
  CHECK(q.w_plus == doctest::Approx(2.0));
  CHECK(q.discriminant == doctest::Approx(2.25));
  try {
    quadratic_roots(1.0, 1.0);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::no_real_roots);
  }
}

TEST_CASE("logistic speeds are 2 sqrt(d k)") {
  for (auto [d, k] : {std::pair{1.0, 1.0}, {2.0, 0.5}, {0.3, 3.0}}) {
    CAPTURE(d);
    const auto m = FluxModel::linear(d);
    const auto r = ReactionModel::logistic(k);
    const auto s = find_sigma_s(m, r);
    CHECK(s.sigma == doctest::Approx(2.0 * std::sqrt(d * k)).epsilon(2e-6));
    CHECK(s.lo <= s.hi);
    CHECK(s.hi - s.lo <= 1e-6 + 1e-12);
    const auto rr = find_sigma_r(m, r);
    CHECK(rr.sigma == doctest::Approx(s.sigma).epsilon(2e-6));
    CHECK(rr.attainment == Attainment::attained);
  }
}

TEST_CASE("bounded flux is pushed above the linear bound") {
  const auto lm = load_preset("bounded");
  const auto s = find_sigma_s(lm.flux, lm.reaction);
  CHECK(s.sigma >= s.lower_bound);
  CHECK_FALSE(s.at_lower_bound);
  CHECK(s.sigma == doctest::Approx(0.97712058).epsilon(1e-5));
}

TEST_CASE("speed classification around sigma_s") {
  const auto m = FluxModel::linear(1.0);
  const auto r = ReactionModel::logistic(1.0);
  CHECK(classify_speed(m, r, 1.5).verdict == SpeedClass::below_sigma_s);
  const auto above = classify_speed(m, r, 2.5);
  CHECK(above.verdict == SpeedClass::above_sigma_s);
  REQUIRE(above.slope);
  CHECK(above.slope->w == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("search cap is reported") {
  const auto lm = load_preset("bounded");
  SpeedSearchOptions opts;
  opts.cap = 0.8;
  try {
    find_sigma_s(lm.flux, lm.reaction, opts);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::bracket_not_closed);
  }
}

TEST_CASE("sigma_r needs a flux without totally degenerate levels") {
  const auto lm = load_preset("example3");
  CHECK_THROWS_AS(find_sigma_r(lm.flux, lm.reaction), HypothesisViolation);
}

TEST_CASE("extrapolation recovers a power law exactly") {
  const std::vector<double> eps = {0.4, 0.2, 0.1};
  std::vector<double> sigma;
  for (double e : eps) sigma.push_back(1.0 + 0.3 * std::pow(e, 1.5));
  const auto ex = extrapolate_to_zero(eps, sigma);
  CHECK(ex.richardson);
  CHECK(ex.limit == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(ex.order == doctest::Approx(1.5).epsilon(1e-8));

  const auto two = extrapolate_to_zero({0.2, 0.1}, {1.2, 1.1});
  CHECK_FALSE(two.richardson);
  CHECK(two.limit == doctest::Approx(1.0));
}

TEST_CASE("viscosity sweep of the logistic equation") {
  const auto m = FluxModel::linear(1.0);
  const auto r = ReactionModel::logistic(1.0);
  const auto res = viscosity_sweep(m, r, {0.1, 0.05, 0.01}, {}, 2);
  REQUIRE(res.rows.size() == 3);
  for (const auto& row : res.rows) CHECK(row.sigma == doctest::Approx(2.0 * std::sqrt(1.0 + row.eps)).epsilon(2e-6));
  CHECK(res.monotone);
  CHECK(res.extrapolation.limit == doctest::Approx(2.0).epsilon(1e-3));
  CHECK_THROWS_AS(viscosity_sweep(m, r, {0.01, 0.1}), Error);
  CHECK_THROWS_AS(viscosity_sweep(m, r, {0.1, -0.1}), Error);
}

TEST_CASE("report serializes both thresholds") {
  const auto m = FluxModel::linear(1.0);
  const auto r = ReactionModel::logistic(1.0);
  const auto rep = compute_speeds(m, r);
  const auto doc = nlohmann::json::parse(to_json(rep));
  CHECK(doc.at("sigma_s").get<double>() == doctest::Approx(2.0).epsilon(2e-6));
  CHECK(doc.at("sigma_r").get<double>() == doctest::Approx(2.0).epsilon(2e-6));
  CHECK(doc.contains("bracket_history_s"));
}
