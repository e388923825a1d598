#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "report.hpp"

using namespace frontspeed::cli;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

GlobalOptions opts_for(const std::string& model, const std::string& dir) {
  GlobalOptions g;
  g.model = model;
  g.out = (fs::path(FRONTSPEED_SCRATCH_DIR) / dir).string();
  g.threads = 2;
  return g;
}

}  // namespace

TEST_CASE("speeds writes a report and a manifest") {
  std::ostringstream out, err;
  const auto g = opts_for("fisher", "speeds");
  REQUIRE(run_speeds(g, {}, out, err) == kOk);
  const auto rep = nlohmann::json::parse(slurp(fs::path(g.out) / "speeds.json"));
  CHECK(rep.at("sigma_s").get<double>() == doctest::Approx(2.0).epsilon(2e-6));
  const auto man = nlohmann::json::parse(slurp(fs::path(g.out) / "manifest.json"));
  CHECK(man.at("command") == "speeds");
  CHECK(man.contains("wall_time_s"));
}

TEST_CASE("example4 config reports the gap") {
  std::ostringstream out, err;
  auto g = opts_for(std::string(FRONTSPEED_CONFIG_DIR) + "/example4.json", "gap");
  REQUIRE(run_speeds(g, {}, out, err) == kOk);
  CHECK(out.str().find("FLAG sigma_s < sigma_r") != std::string::npos);
}

TEST_CASE("exit codes") {
  std::ostringstream out, err;
  CHECK(run_speeds(opts_for("/nonexistent.json", "x"), {}, out, err) == kParse);
  auto bad_param = opts_for("fisher", "x");
  bad_param.params = {"d=abc"};
  CHECK(run_speeds(bad_param, {}, out, err) == kParse);
  bad_param.params = {"c1=2"};
  CHECK(run_speeds(bad_param, {}, out, err) == kParse);

  ProfileArgs slow;
  slow.sigma = 1.0;
  CHECK(run_profile(opts_for("fisher", "x"), slow, out, err) == kBelowSigmaS);

  CHECK(run_sweep(opts_for("fisher", "x"), {}, out, err) == kParse);
  CHECK(run_sweep(opts_for("fisher", "x"), SweepArgs{{0.1, -0.1}}, out, err) == kParse);

  CHECK(run_validate(opts_for("example4", "x"), {}, out, err) == kHypothesis);
  ExampleArgs n9;
  n9.n = 9;
  CHECK(run_example(opts_for("fisher", "x"), n9, out, err) != kOk);
}

TEST_CASE("profile output is deterministic") {
  ProfileArgs a;
  a.sigma = 2.5;
  a.window = 10.0;
  a.h = 0.05;
  std::ostringstream out, err;
  const auto g1 = opts_for("fisher", "profile_a");
  const auto g2 = opts_for("fisher", "profile_b");
  REQUIRE(run_profile(g1, a, out, err) == kOk);
  REQUIRE(run_profile(g2, a, out, err) == kOk);
  const auto p1 = slurp(fs::path(g1.out) / "profile.csv");
  CHECK(p1.rfind("xi,u,is_jump\n", 0) == 0);
  CHECK(p1 == slurp(fs::path(g2.out) / "profile.csv"));
  CHECK(slurp(fs::path(g1.out) / "jumps.csv") == "xi_k,mu,nu,rh_residual,bdp_margin\n");
}

TEST_CASE("sweep output is deterministic across thread counts") {
  std::ostringstream out, err;
  auto g1 = opts_for("fisher", "sweep_a");
  auto g2 = opts_for("fisher", "sweep_b");
  g1.threads = 1;
  g2.threads = 3;
  const SweepArgs a{{0.1, 0.05, 0.01}};
  REQUIRE(run_sweep(g1, a, out, err) == kOk);
  REQUIRE(run_sweep(g2, a, out, err) == kOk);
  CHECK(slurp(fs::path(g1.out) / "sweep.csv") == slurp(fs::path(g2.out) / "sweep.csv"));
}

TEST_CASE("parameter parsing") {
  const auto p = parse_params({"d=2", "k=0.5"});
  REQUIRE(p.size() == 2);
  CHECK(p[0].first == "d");
  CHECK(p[1].second == doctest::Approx(0.5));
  CHECK_THROWS(parse_params({"=2"}));
  CHECK_THROWS(parse_params({"d"}));
  CHECK(format_number(0.5) == "5.000000000000e-01");
}
