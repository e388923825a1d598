#include <cmath>

#include "doctest.h"
#include "frontspeed/errors.hpp"
#include "frontspeed/examples.hpp"
#include "frontspeed/profile.hpp"
#include "frontspeed/speeds.hpp"

using namespace frontspeed;

namespace {

IntegrationOptions tight() {
  IntegrationOptions o;
  o.rtol = 1e-12;
  o.atol = 1e-16;
  return o;
}

// (1 + e^{-x/sqrt6})^{-2} shifted so that u(0) = 1/2
double closed_form_wave(double xi) {
  const double s6 = std::sqrt(6.0);
  const double x0 = -s6 * std::log(std::sqrt(2.0) - 1.0);
  return std::pow(1.0 + std::exp(-(xi + x0) / s6), -2.0);
}

struct Example4 {
  ExampleModel model;
  SpeedSolution sol;
};

Example4 example4_at_sigma_s(double lambda) {
  auto spec = default_family_spec();
  spec.lambda = lambda;
  auto ex = make_example4(spec);
  const auto s = find_sigma_s(ex.flux, ex.reaction);
  auto sol = integrate_halfplane(ex.flux, ex.reaction, s.hi, SolveMode::extended, tight());
  return {std::move(ex), std::move(sol)};
}

}  // namespace

TEST_CASE("closed-form logistic wave") {
  const auto m = FluxModel::linear(1.0);
  const auto r = ReactionModel::logistic(1.0);
  const double sigma = 5.0 / std::sqrt(6.0);
  const auto sol = integrate_halfplane(m, r, sigma, SolveMode::extended, tight());
  const auto G = build_G(m, sol);
  CHECK(G.jumps().empty());
  CHECK(G.diverges_low());
  CHECK(G.diverges_high());
  // below xi = -19 the wave drops under the 1e-6 level window
  const auto p = invert_profile(G, uniform_grid(-18.0, 20.0, 0.05));
  CHECK(p.kind == ProfileKind::classic);
  double worst = 0.0;
  for (std::size_t i = 0; i < p.xi.size(); ++i) worst = std::max(worst, std::abs(p.u[i] - closed_form_wave(p.xi[i])));
  CHECK(worst < 1e-10);
}

TEST_CASE("G and its inverse are exact inverses") {
  const auto m = FluxModel::linear(1.0);
  const auto r = ReactionModel::logistic(1.0);
  const auto sol = integrate_halfplane(m, r, 2.5, SolveMode::extended, tight());
  const auto G = build_G(m, sol);
  CHECK(G(0.5) == doctest::Approx(0.0));
  for (double u : {0.01, 0.2, 0.5, 0.77, 0.99}) {
    CAPTURE(u);
    CHECK(std::abs(G.level(G(u)) - u) < 1e-12);
    CHECK(std::abs(static_cast<double>(G.level_extended(G(u))) - u) < 1e-12);
  }
}

TEST_CASE("profile is monotone and satisfies V = a(u, u')") {
  const auto m = FluxModel::linear(2.0);
  const auto r = ReactionModel::logistic(1.0);
  const double sigma = 3.5;
  const auto sol = integrate_halfplane(m, r, sigma, SolveMode::extended, tight());
  const auto G = build_G(m, sol);
  const double h = 1e-3;
  const auto p = invert_profile(G, uniform_grid(-15.0, 15.0, h));
  for (std::size_t i = 1; i + 1 < p.u.size(); ++i) {
    REQUIRE(p.u[i] >= p.u[i - 1]);
    if (i % 500 != 0) continue;
    const double du = (p.u[i + 1] - p.u[i - 1]) / (2.0 * h);
    CHECK(m.eval(p.u[i], du) == doctest::Approx(sol.V_at(p.u[i])).epsilon(1e-5));
  }
}

TEST_CASE("anchor shifts the profile by a translation") {
  const auto m = FluxModel::linear(1.0);
  const auto r = ReactionModel::logistic(1.0);
  const auto sol = integrate_halfplane(m, r, 2.2, SolveMode::extended, tight());
  const auto A = build_G(m, sol, 0.5);
  const auto B = build_G(m, sol, 0.3);
  const double shift = A(0.3);
  for (double xi : {-3.0, -1.0, 0.0, 2.0, 5.0}) {
    CAPTURE(xi);
    CHECK(A.level(xi + shift) == doctest::Approx(B.level(xi)).epsilon(1e-11));
  }
}

TEST_CASE("classic residual converges at second order") {
  const auto m = FluxModel::linear(1.0);
  const auto r = ReactionModel::logistic(1.0);
  const double sigma = 2.5;
  const auto sol = integrate_halfplane(m, r, sigma, SolveMode::extended, tight());
  const auto G = build_G(m, sol);
  const auto coarse = residual_classic(G, m, r, -15.0, 15.0, 2e-3);
  const auto fine = residual_classic(G, m, r, -15.0, 15.0, 1e-3);
  CHECK(coarse.max_abs < 1e-4);
  const double ratio = coarse.max_abs / fine.max_abs;
  CHECK(ratio > 3.0);
  CHECK(ratio < 5.0);
}

TEST_CASE("unbounded saturation has no jump conditions") {
  const auto m = FluxModel::linear(1.0);
  const auto r = ReactionModel::logistic(1.0);
  const auto sol = integrate_halfplane(m, r, 2.5, SolveMode::extended);
  auto p = invert_profile(build_G(m, sol), uniform_grid(-5.0, 5.0, 0.1));
  CHECK(check_rankine_hugoniot(p, m, 2.5).empty());
  p.saturation_points.push_back({0.0, 0.2, 0.6});
  try {
    check_rankine_hugoniot(p, m, 2.5);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::unbounded_a_plus);
  }
}

TEST_CASE("anchor inside a plateau is refused") {
  const auto ex = example4_at_sigma_s(kSmallLambda);
  try {
    build_G(ex.model.flux, ex.sol, 0.5);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::anchor_on_plateau);
  }
  const double a = default_anchor(ex.model.flux, ex.sol);
  CHECK_NOTHROW(build_G(ex.model.flux, ex.sol, a));
}

TEST_CASE("saturated profile has one admissible jump") {
  const auto ex = example4_at_sigma_s(kSmallLambda);
  const auto G = build_G(ex.model.flux, ex.sol, default_anchor(ex.model.flux, ex.sol));
  REQUIRE(G.jumps().size() == 1);
  const double h = 1e-2;
  const auto p = invert_profile(G, uniform_grid(-30.0, 30.0, h));
  CHECK(p.kind == ProfileKind::flux_saturated);
  REQUIRE(p.saturation_points.size() == 1);

  std::size_t at = 0;
  for (std::size_t i = 0; i < p.is_jump.size(); ++i) {
    if (p.is_jump[i]) at = i;
  }
  REQUIRE(at > 0);
  const auto jump = G.jumps()[0];
  CHECK(p.u[at] - p.u[at - 1] >= jump.nu - jump.mu);
  CHECK(p.saturation_points[0].mu == doctest::Approx(jump.mu));

  const auto rep = check_jumps(p, ex.model.flux, ex.sol.sigma, 1e-6);
  REQUIRE(rep.jumps.size() == 1);
  CHECK(rep.rh_ok);
  CHECK(rep.bdp_ok);
  CHECK(std::abs(rep.jumps[0].h_residual - rep.jumps[0].rh_residual) < 1e-12);
  CHECK(rep.jumps[0].mu < default_family_spec().u2);
  CHECK(rep.jumps[0].nu > default_family_spec().u1);
}

TEST_CASE("uniform grid") {
  const auto g = uniform_grid(-1.0, 1.0, 0.25);
  REQUIRE(g.size() == 9);
  CHECK(g.front() == -1.0);
  CHECK(g.back() == doctest::Approx(1.0));
}
