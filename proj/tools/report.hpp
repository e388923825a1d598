#pragma once

#include <cstdint>
#include <exception>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace frontspeed::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kParse = 2,
  kHypothesis = 3,
  kBracket = 4,
  kBelowSigmaS = 5,
};

/// Maps library errors onto the exit codes above.
int exit_code_for(const std::exception& e);

struct GlobalOptions {
  std::string model = "fisher";  // preset name or path to a JSON config
  std::vector<std::string> params;  // key=value overrides
  std::optional<double> lambda;
  std::optional<double> tol;
  std::string out = "out";
  unsigned threads = 0;
  std::uint64_t seed = 0;
};

struct SpeedsArgs {
  bool skip_sigma_r = false;
};

struct ProfileArgs {
  std::optional<double> sigma;   // defaults to sigma_s
  std::optional<double> anchor;  // defaults to default_anchor()
  std::optional<double> window;  // xi half-width; defaults to the G range clipped to 100
  double h = 1e-2;
};

struct SweepArgs {
  std::vector<double> eps;
};

struct ValidateArgs {
  double h = 0.05;
  double L = 200.0;
  double T = 60.0;
  double speed_tol = 0.05;
  double spread_tol = 0.02;
};

struct ExampleArgs {
  int n = 4;
  std::vector<double> sigmas = {0.1, 0.25, 0.5, 1.0, 2.0};
};

int run_speeds(const GlobalOptions& g, const SpeedsArgs& a, std::ostream& out, std::ostream& err);
int run_profile(const GlobalOptions& g, const ProfileArgs& a, std::ostream& out, std::ostream& err);
int run_sweep(const GlobalOptions& g, const SweepArgs& a, std::ostream& out, std::ostream& err);
int run_validate(const GlobalOptions& g, const ValidateArgs& a, std::ostream& out, std::ostream& err);
int run_example(const GlobalOptions& g, const ExampleArgs& a, std::ostream& out, std::ostream& err);

/// "%.12e"
std::string format_number(double x);

std::vector<std::pair<std::string, double>> parse_params(const std::vector<std::string>& items);

}  // namespace frontspeed::cli
