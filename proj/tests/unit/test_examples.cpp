#include <cmath>

#include "doctest.h"
#include "frontspeed/errors.hpp"
#include "frontspeed/examples.hpp"
#include "frontspeed/speeds.hpp"

using namespace frontspeed;

namespace {

ErrorCode spec_error(const DegenerateFamilySpec& s) {
  try {
    make_example4(s);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::invalid_argument;
}

}  // namespace

TEST_CASE("family diffusion pieces") {
  const auto s = default_family_spec();
  const auto d1 = family_d1(s);
  const auto d2 = family_d2(s);
  CHECK(d1.value(0.8) == doctest::Approx(40.0 * 0.04));
  CHECK(d1.value(0.5) == 0.0);
  CHECK(d2.value(0.1) == doctest::Approx(0.2 * 0.04));
  CHECK(d2.value(0.4) == 0.0);
  CHECK(d2.derivative(0.1) == doctest::Approx(-2.0 * 0.2 * 0.2));

  auto smooth = s;
  smooth.c2_smooth = true;
  CHECK(family_d1(smooth).value(0.8) == doctest::Approx(40.0 * 0.008));
  CHECK(family_d1(smooth).second_derivative(s.u1 + 1e-9) == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("bump has unit height and support [delta, kappa]") {
  const auto s = default_family_spec();
  const auto b = family_bump(s);
  const double mid = 0.5 * (s.delta + s.kappa);
  CHECK(b.value(mid) == doctest::Approx(1.0));
  CHECK(b.value(s.delta) == doctest::Approx(0.0));
  CHECK(b.value(s.kappa) == doctest::Approx(0.0));
  CHECK(b.value(0.9) == 0.0);
  const double u = 0.25;
  const double h = 0.5 * (s.kappa - s.delta);
  CHECK(b.value(u) == doctest::Approx(std::pow((u - s.delta) * (s.kappa - u), 3) / std::pow(h, 6)));
}

TEST_CASE("spec violations") {
  auto s = default_family_spec();
  s.u2 = 0.7;
  CHECK(spec_error(s) == ErrorCode::spec_violation);
  s = default_family_spec();
  s.c1 = 0.0;
  CHECK(spec_error(s) == ErrorCode::spec_violation);
  s = default_family_spec();
  s.kappa = 0.55;
  CHECK(spec_error(s) == ErrorCode::spec_violation);
  s = default_family_spec();
  s.lambda = -1.0;
  CHECK(spec_error(s) == ErrorCode::spec_violation);
  CHECK_THROWS_AS(make_example(5, default_family_spec()), Error);
}

TEST_CASE("Example 3 is ultra-degenerate, Example 4 is not") {
  const auto s = default_family_spec();
  const auto ex3 = make_example(3, s);
  REQUIRE(ex3.flux.degenerate_levels().size() == 1);
  CHECK(ex3.flux.degenerate_levels()[0].lo == doctest::Approx(s.u2));
  CHECK(ex3.flux.degenerate_levels()[0].hi == doctest::Approx(s.u1));
  CHECK(make_example4(s).flux.degenerate_levels().empty());
}

TEST_CASE("characteristic values") {
  const auto s = default_family_spec();
  const auto ex = make_example(3, s);
  const auto cv = characteristic_values(ex, s, {0.5, 1.0});
  // frozen from an independent run; tau solves sigma = 2 c1 (alpha_sigma - u1)
  CHECK(cv.tau == doctest::Approx(1.6213946610).epsilon(1e-6));
  CHECK(cv.sigma_tilde == doctest::Approx(0.6360252991).epsilon(1e-6));
  CHECK(cv.sigma_tilde < cv.tau);

  // D1'(alpha_sigma) - sigma closes like sqrt(tau - sigma); above tau the
  // classic solution stalls at u1
  auto gap = [&](double d) {
    const double sg = cv.tau - d;
    return 2.0 * s.c1 * (stall_levels(ex, sg).alpha - s.u1) - sg;
  };
  const double g7 = gap(1e-7), g9 = gap(1e-9);
  CHECK(g9 > 0.0);
  CHECK(g9 < 2e-4);
  CHECK(g7 / g9 == doctest::Approx(10.0).epsilon(0.3));
  CHECK(stall_levels(ex, cv.tau + 1e-7).alpha == doctest::Approx(s.u1));
  const auto at_tilde = stall_levels(ex, cv.sigma_tilde);
  CHECK(at_tilde.beta == doctest::Approx(s.u2).epsilon(1e-5));

  REQUIRE(cv.samples.size() == 2);
  // the stall level falls and beta rises with sigma
  CHECK(cv.samples[0].alpha > cv.samples[1].alpha);
  CHECK(cv.samples[0].beta < cv.samples[1].beta);
}

TEST_CASE("Example 4 saturated line") {
  auto s = default_family_spec();
  s.lambda = kSmallLambda;
  const auto ex = make_example4(s);
  const auto ss = find_sigma_s(ex.flux, ex.reaction);
  CHECK(ss.sigma == doctest::Approx(0.41662022).epsilon(2e-6));
  const auto sol = integrate_halfplane(ex.flux, ex.reaction, ss.hi, SolveMode::extended);
  const auto line = saturated_line(sol);
  REQUIRE(line);
  CHECK(line->gamma < s.u2);
  CHECK(line->alpha > s.u1);
  CHECK(line->gamma == doctest::Approx(0.0364198).epsilon(1e-4));
  CHECK(line->alpha == doctest::Approx(0.6842297).epsilon(1e-5));
  CHECK(sol.V_at(line->alpha) == doctest::Approx(ss.hi * line->alpha + line->c).epsilon(1e-8));
}

TEST_CASE("Example 3 and Example 4 share sigma_s for small lambda") {
  const auto s = default_family_spec();
  const auto s3 = find_sigma_s(make_example(3, s).flux, make_example(3, s).reaction);
  auto small = s;
  small.lambda = kSmallLambda;
  const auto ex4 = make_example4(small);
  CHECK(std::abs(find_sigma_s(ex4.flux, ex4.reaction).sigma - s3.sigma) <= 2e-6);
  auto large = s;
  large.lambda = kLargeLambda;
  const auto big = make_example4(large);
  CHECK(find_sigma_s(big.flux, big.reaction).sigma > s3.sigma + 1e-6);
}
