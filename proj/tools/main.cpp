#include <iostream>

#include "CLI11.hpp"
#include "report.hpp"

using namespace frontspeed::cli;

int main(int argc, char** argv) {
  CLI::App app{"frontspeed: traveling-wave speed thresholds for u_t = (a(u,u_x))_x + f(u)"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--model", g.model, "preset (fisher, bounded, example1..example4) or JSON config path");
  app.add_option("--param", g.params, "key=value model override, repeatable");
  app.add_option("--lambda", g.lambda, "bump weight for example4 models");
  app.add_option("--tol", g.tol, "bisection tolerance on sigma");
  app.add_option("--out", g.out, "output directory");
  app.add_option("--threads", g.threads, "worker threads (0 = hardware)");
  app.add_option("--seed", g.seed, "seed recorded in the manifest");

  SpeedsArgs speeds;
  auto* c_speeds = app.add_subcommand("speeds", "compute sigma_r and sigma_s");
  c_speeds->add_flag("--no-sigma-r", speeds.skip_sigma_r, "skip the classic threshold");

  ProfileArgs profile;
  auto* c_profile = app.add_subcommand("profile", "reconstruct a wave profile and check its jumps");
  c_profile->add_option("--sigma", profile.sigma, "speed (default sigma_s)");
  c_profile->add_option("--anchor", profile.anchor, "level placed at xi = 0");
  c_profile->add_option("--window", profile.window, "half-width of the xi window");
  c_profile->add_option("--dxi", profile.h, "xi grid spacing");

  SweepArgs sweep;
  auto* c_sweep = app.add_subcommand("sweep", "sigma_r of viscosity approximations");
  c_sweep->add_option("--eps", sweep.eps, "viscosities, comma separated")->delimiter(',')->required();

  ValidateArgs validate;
  auto* c_validate = app.add_subcommand("validate", "compare a PDE simulation with sigma_s");
  c_validate->add_option("--dx", validate.h, "spatial step");
  c_validate->add_option("--L", validate.L, "domain half-width");
  c_validate->add_option("--T", validate.T, "end time");

  ExampleArgs example;
  auto* c_example = app.add_subcommand("example", "characteristic values of the degenerate families");
  c_example->add_option("--n", example.n, "example number 1..4");
  c_example->add_option("--sigmas", example.sigmas, "stall-level probe speeds")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kParse;
  }

  if (c_speeds->parsed()) return run_speeds(g, speeds, std::cout, std::cerr);
  if (c_profile->parsed()) return run_profile(g, profile, std::cout, std::cerr);
  if (c_sweep->parsed()) return run_sweep(g, sweep, std::cout, std::cerr);
  if (c_validate->parsed()) return run_validate(g, validate, std::cout, std::cerr);
  if (c_example->parsed()) return run_example(g, example, std::cout, std::cerr);
  return kParse;
}
