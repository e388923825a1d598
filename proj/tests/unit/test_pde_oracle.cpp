#include <cmath>

#include "doctest.h"
#include "frontspeed/errors.hpp"
#include "frontspeed/pde_oracle.hpp"

using namespace frontspeed;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::invalid_argument;
}

SimGrid small_grid() {
  SimGrid g;
  g.h = 0.25;
  g.L = 40.0;
  g.T = 10.0;
  g.x0 = -20.0;
  return g;
}

}  // namespace

TEST_CASE("stable states stay put") {
  const auto m = FluxModel::linear(1.0);
  const auto r = ReactionModel::logistic(1.0);
  auto g = small_grid();
  g.shape = InitialShape::constant;
  for (double level : {0.0, 1.0}) {
    g.level = level;
    const auto tr = simulate_front(m, r, g);
    for (double u : tr.final_u) CHECK(u == level);
  }
  g.level = 0.3;
  const auto tr = simulate_front(m, r, g);
  CHECK(tr.final_u.front() == doctest::Approx(tr.final_u.back()));
  CHECK(tr.final_u.front() > 0.99);
}

TEST_CASE("symmetric bump spreads symmetrically") {
  const auto m = FluxModel::linear(1.0);
  const auto r = ReactionModel::logistic(1.0);
  auto g = small_grid();
  g.shape = InitialShape::bump;
  g.x0 = 0.0;
  g.width = 3.0;
  g.T = 12.0;
  const auto tr = simulate_front(m, r, g);
  const auto right = measure_speed(tr);
  const auto left = measure_speed(tr, 0.25, true);
  for (std::size_t k = 0; k < 3; ++k) CHECK(right.speed[k] == doctest::Approx(-left.speed[k]).epsilon(1e-9));
  const auto& u = tr.final_u;
  for (std::size_t i = 0; i < u.size() / 2; ++i) REQUIRE(u[i] == doctest::Approx(u[u.size() - 1 - i]).epsilon(1e-12));
}

TEST_CASE("step data stays monotone and inside [0, 1]") {
  const auto m = FluxModel::linear(1.0);
  const auto r = ReactionModel::logistic(1.0);
  const auto tr = simulate_front(m, r, small_grid());
  CHECK(tr.non_monotone_frames == 0);
  CHECK(tr.clipped == 0);
  CHECK(tr.dt <= tr.dt_limit);
  CHECK(tr.dt_limit == doctest::Approx(0.25 * 0.25 / 2.0));
  CHECK(tr.t.size() == 101);
  CHECK(tr.t.back() == doctest::Approx(10.0));
}

TEST_CASE("explicit dt above the stability bound is refused") {
  const auto m = FluxModel::linear(1.0);
  const auto r = ReactionModel::logistic(1.0);
  auto g = small_grid();
  g.dt = 0.05;
  CHECK(code_of([&] { simulate_front(m, r, g); }) == ErrorCode::cfl_violation);
}

TEST_CASE("fluxes that are not over-elliptic are refused") {
  const auto lm = load_preset("example3");
  CHECK_THROWS_AS(simulate_front(lm.flux, lm.reaction, small_grid()), HypothesisViolation);
}

TEST_CASE("fit window") {
  const auto m = FluxModel::linear(1.0);
  const auto r = ReactionModel::logistic(1.0);
  const auto tr = simulate_front(m, r, small_grid());
  CHECK(code_of([&] { measure_speed(tr, 0.1); }) == ErrorCode::insufficient_window);
  CHECK(code_of([&] { measure_speed(tr, 0.99); }) == ErrorCode::insufficient_window);
  CHECK_NOTHROW(measure_speed(tr, 0.5));
}

TEST_CASE("trajectory csv layout") {
  Trajectory tr;
  tr.t = {0.0, 0.5};
  for (auto& x : tr.x) x = {1.0, 2.0};
  const auto csv = trajectory_csv(tr);
  CHECK(csv.rfind("t,x_0.1,x_0.5,x_0.9\n", 0) == 0);
  CHECK(csv.find("5.000000000000e-01,2.000000000000e+00") != std::string::npos);
}

TEST_CASE("front speed converges under refinement") {
  const auto m = FluxModel::linear(1.0);
  const auto r = ReactionModel::logistic(1.0);
  SimGrid g;
  g.L = 100.0;
  g.x0 = -50.0;
  g.T = 40.0;
  double c[3];
  int i = 0;
  for (double h : {0.5, 0.25, 0.125}) {
    g.h = h;
    c[i++] = measure_speed(simulate_front(m, r, g)).mean;
  }
  const double d1 = std::abs(c[0] - c[1]);
  const double d2 = std::abs(c[1] - c[2]);
  CAPTURE(c[0]);
  CAPTURE(c[1]);
  CAPTURE(c[2]);
  CHECK(d2 <= 0.7 * d1);
}
