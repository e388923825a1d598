#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "frontspeed/classify.hpp"
#include "frontspeed/flux.hpp"
#include "frontspeed/reaction.hpp"

namespace frontspeed {

/// gamma0 = da/ds(0, 0) * f'(0)
double gamma0(const FluxModel& m, const ReactionModel& r);

/// 2 sqrt(gamma0); throws Degenerate when 0 is a totally degenerate level.
double lower_speed_bound(const FluxModel& m, const ReactionModel& r);

struct SolverOverrides {
  std::optional<double> rtol;
  std::optional<double> atol;
  std::optional<double> tol_sigma;
  std::optional<double> u_min;
};

struct LoadedModel {
  FluxModel flux;
  ReactionModel reaction;
  FluxClassification classification;
  std::optional<double> viscosity;
  SolverOverrides solver;
  std::string preset;       // empty for file configs
  std::string config_json;  // normalized copy of the resolved config
};

/// Parses a JSON model config. Throws ParseError or HypothesisViolation.
LoadedModel load_model(const std::string& config_text);
/// Same, with key=value overrides named as for the matching preset.
LoadedModel load_model(const std::string& config_text,
                       const std::vector<std::pair<std::string, double>>& params);

/// Resolves a builtin preset name (fisher, bounded, example1..example4),
/// applying key=value parameter overrides.
LoadedModel load_preset(const std::string& name,
                        const std::vector<std::pair<std::string, double>>& params = {});

bool is_preset(const std::string& name);

}  // namespace frontspeed
