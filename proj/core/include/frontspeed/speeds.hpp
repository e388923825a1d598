#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "frontspeed/halfplane.hpp"
#include "frontspeed/model.hpp"

namespace frontspeed {

struct QuadraticRoots {
  double w_minus = 0.0;
  double w_plus = 0.0;
  double discriminant = 0.0;  // sigma^2 - 4 gamma0
};

/// Roots of w^2 - sigma w + gamma0 = 0. Throws NoRealRoots.
QuadraticRoots quadratic_roots(double sigma, double gamma0);

enum class SpeedClass { below_sigma_s, at_sigma_s, above_sigma_s, inconclusive };
enum class Attainment { attained, not_attained, unknown };

std::string to_string(SpeedClass c);
std::string to_string(Attainment a);

struct SpeedSearchOptions {
  double tol_sigma = 1e-6;
  double cap = 1e4;
  IntegrationOptions integration;
};

struct SpeedClassification {
  SpeedClass verdict = SpeedClass::inconclusive;
  double V0 = 0.0;
  std::optional<SlopeEstimate> slope;
  std::optional<QuadraticRoots> roots;
  double dead_band = 0.0;
};

SpeedClassification classify_speed(const FluxModel& m, const ReactionModel& r, double sigma,
                                   const SpeedSearchOptions& opts = {});

struct BracketProbe {
  double sigma = 0.0;
  bool outcome = false;
  double V_end = 0.0;
  double u_end = 0.0;
  std::optional<double> alpha;
};

struct SigmaSearch {
  double sigma = 0.0;
  double lo = 0.0;  // predicate false (or the lower bound itself)
  double hi = 0.0;  // predicate true
  std::vector<BracketProbe> history;
};

struct SigmaSResult : SigmaSearch {
  double lower_bound = 0.0;
  double gamma0 = 0.0;
  bool at_lower_bound = false;
};

struct SigmaRResult : SigmaSearch {
  Attainment attainment = Attainment::unknown;
  std::optional<double> alpha_below;  // stall level just below sigma_r
};

/// Bisection on "extended solution vanishes at 0". Throws BracketNotClosed.
SigmaSResult find_sigma_s(const FluxModel& m, const ReactionModel& r, const SpeedSearchOptions& opts = {});

/// Bisection on "classic solution reaches 0 without saturating and vanishes
/// there". Throws HypothesisViolation("H_r") for ultra-degenerate fluxes.
SigmaRResult find_sigma_r(const FluxModel& m, const ReactionModel& r, const SpeedSearchOptions& opts = {});

struct SpeedReport {
  std::string model_name;
  std::optional<double> sigma_r;
  double sigma_s = 0.0;
  double lower_bound = 0.0;
  double gamma0 = 0.0;
  std::pair<double, double> bracket_s{0.0, 0.0};
  std::optional<std::pair<double, double>> bracket_r;
  std::vector<BracketProbe> history_s;
  std::vector<BracketProbe> history_r;
  Attainment attainment = Attainment::unknown;
  std::optional<double> alpha_below_r;
  std::optional<SlopeEstimate> slope_at_sigma_s;
  std::optional<QuadraticRoots> roots_at_sigma_s;
  std::string sigma_r_note;  // why sigma_r is absent, when it is
  double tol_sigma = 0.0;
};

SpeedReport compute_speeds(const FluxModel& m, const ReactionModel& r, const SpeedSearchOptions& opts = {},
                           bool with_sigma_r = true);

/// Serialized report (JSON text) with the full bracket histories.
std::string to_json(const SpeedReport& report, int indent = 2);

struct SweepRow {
  double eps = 0.0;
  double sigma = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  bool monotone = true;  // sigma here <= sigma at the previous (larger) eps + tol
};

struct Extrapolation {
  double limit = 0.0;
  double error = 0.0;
  double order = 1.0;
  bool richardson = false;  // false: linear fallback on the last two rows
};

struct SweepResult {
  std::vector<SweepRow> rows;
  Extrapolation extrapolation;
  bool monotone = true;
};

/// Extrapolates sigma(eps) = L + C eps^p to eps = 0 from the three smallest eps.
Extrapolation extrapolate_to_zero(const std::vector<double>& eps, const std::vector<double>& sigma);

/// sigma_r of the viscosity-wrapped fluxes for a strictly decreasing eps list;
/// probes run concurrently on up to `threads` workers.
SweepResult viscosity_sweep(const FluxModel& m, const ReactionModel& r, const std::vector<double>& eps,
                            const SpeedSearchOptions& opts = {}, unsigned threads = 0);

}  // namespace frontspeed
