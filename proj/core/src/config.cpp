#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "frontspeed/errors.hpp"
#include "frontspeed/examples.hpp"
#include "frontspeed/model.hpp"
#include "json.hpp"

namespace frontspeed {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorCode::parse_error, what); }

double number(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) parse_fail(std::string("'") + key + "' must be a number");
  return j.at(key).get<double>();
}

double required_number(const json& j, const char* key) {
  if (!j.contains(key)) parse_fail(std::string("missing '") + key + "'");
  return number(j, key, 0.0);
}

std::vector<double> number_list(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) parse_fail(std::string("'") + key + "' must be an array");
  std::vector<double> out;
  for (const auto& x : j.at(key)) {
    if (!x.is_number()) parse_fail(std::string("'") + key + "' entries must be numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

PiecewisePolynomial parse_diffusivity(const json& d) {
  if (d.is_number()) return PiecewisePolynomial::constant(d.get<double>());
  if (!d.is_object()) parse_fail("'D' must be a number or an object");
  if (d.contains("constant")) return PiecewisePolynomial::constant(required_number(d, "constant"));
  if (d.contains("polynomial")) {
    return PiecewisePolynomial::polynomial(number_list(d, "polynomial"), number(d, "origin", 0.0));
  }
  if (d.contains("pieces")) {
    std::vector<PiecewisePolynomial::Piece> pieces;
    for (const auto& p : d.at("pieces")) {
      PiecewisePolynomial::Piece piece;
      piece.lo = required_number(p, "lo");
      piece.hi = required_number(p, "hi");
      piece.terms.push_back({number(p, "origin", 0.0), number_list(p, "coefficients")});
      pieces.push_back(std::move(piece));
    }
    try {
      return PiecewisePolynomial(std::move(pieces));
    } catch (const Error& e) {
      parse_fail(e.what());
    }
  }
  parse_fail("'D' needs one of constant, polynomial, pieces");
}

Limiter parse_limiter(const json& flux) {
  if (!flux.contains("phi")) return Limiter::ratio(2.0);
  const json& phi = flux.at("phi");
  try {
    if (phi.is_string()) {
      if (phi.get<std::string>() == "atan") return Limiter::arctangent();
      parse_fail("unknown limiter '" + phi.get<std::string>() + "'");
    }
    if (phi.contains("ratio_p")) return Limiter::ratio(required_number(phi, "ratio_p"));
    const std::string kind = phi.value("kind", "");
    if (kind == "atan") return Limiter::arctangent();
    if (kind == "ratio_p") return Limiter::ratio(number(phi, "p", 2.0));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::parse_error) throw;
    parse_fail(e.what());
  }
  parse_fail("'phi' must be \"atan\" or {\"ratio_p\": p}");
}

DegenerateFamilySpec parse_family(const json& flux, const json* reaction) {
  DegenerateFamilySpec s = default_family_spec();
  s.u1 = number(flux, "u1", s.u1);
  s.u2 = number(flux, "u2", s.u2);
  s.c1 = number(flux, "c1", s.c1);
  s.c2 = number(flux, "c2", s.c2);
  s.lambda = number(flux, "lambda", s.lambda);
  s.delta = number(flux, "delta", s.delta);
  s.kappa = number(flux, "kappa", s.kappa);
  if (flux.contains("smoothness")) {
    const std::string sm = flux.at("smoothness").get<std::string>();
    if (sm != "C1" && sm != "C2") parse_fail("smoothness must be C1 or C2");
    s.c2_smooth = sm == "C2";
  }
  if (flux.contains("phi")) {
    const Limiter lim = parse_limiter(flux);
    s.phi_p = lim.kind() == Limiter::Kind::atan ? 0.0 : lim.exponent();
  }
  if (reaction && reaction->value("kind", "logistic") == "logistic") s.k = number(*reaction, "k", s.k);
  return s;
}

struct Built {
  FluxModel flux;
  std::optional<ReactionModel> reaction;
};

Built build_flux(const json& flux, const json* reaction) {
  if (!flux.is_object()) parse_fail("'flux' must be an object");
  const std::string kind = flux.value("kind", "");
  try {
    if (kind == "linear") {
      const double d = number(flux, "d", 1.0);
      if (!(d > 0.0)) parse_fail("linear flux needs d > 0");
      return {FluxModel::linear(d), std::nullopt};
    }
    if (kind == "separable") {
      if (!flux.contains("D")) parse_fail("separable flux needs 'D'");
      const auto D = parse_diffusivity(flux.at("D"));
      for (int i = 0; i <= 256; ++i) {
        if (D.value(i / 256.0) < 0.0) parse_fail("diffusivity D must be nonnegative on [0, 1]");
      }
      const bool piecewise = D.pieces().size() > 1;
      return {FluxModel::separable(D, parse_limiter(flux), piecewise ? FluxKind::piecewise : FluxKind::separable),
              std::nullopt};
    }
    if (kind == "example1" || kind == "example2" || kind == "example3" || kind == "example4") {
      const auto spec = parse_family(flux, reaction);
      auto ex = (kind == "example4") ? make_example4(spec) : make_example(kind.back() - '0', spec);
      return {ex.flux, ex.reaction};
    }
    if (kind == "tabulated") {
      std::vector<std::vector<double>> values;
      if (!flux.contains("values") || !flux.at("values").is_array()) parse_fail("tabulated flux needs 'values'");
      for (const auto& row : flux.at("values")) values.push_back(row.get<std::vector<double>>());
      std::vector<double> sat;
      if (flux.contains("saturation")) sat = number_list(flux, "saturation");
      return {FluxModel::tabulated(number_list(flux, "u"), number_list(flux, "s"), std::move(values), std::move(sat)),
              std::nullopt};
    }
  } catch (const json::exception& e) {
    parse_fail(std::string("flux: ") + e.what());
  }
  parse_fail("unknown flux kind '" + kind + "'");
}

ReactionModel build_reaction(const json& r) {
  if (!r.is_object()) parse_fail("'reaction' must be an object");
  const std::string kind = r.value("kind", "logistic");
  if (kind == "logistic") return ReactionModel::logistic(number(r, "k", 1.0));
  if (kind == "custom") {
    if (r.contains("polynomial")) return ReactionModel::polynomial(number_list(r, "polynomial"));
    if (r.contains("coefficients")) return ReactionModel::polynomial(number_list(r, "coefficients"));
    parse_fail("custom reaction needs 'polynomial' coefficients");
  }
  parse_fail("unknown reaction kind '" + kind + "'");
}

json preset_document(const std::string& name) {
  if (name == "fisher") {
    return json{{"flux", {{"kind", "linear"}, {"d", 1.0}}}, {"reaction", {{"kind", "logistic"}, {"k", 1.0}}}};
  }
  if (name == "bounded") {
    // D(u) = d0 + d2 u^2 with the ratio limiter, p = 2
    return json{{"flux", {{"kind", "separable"}, {"D", {{"polynomial", {0.1, 0.0, 4.0}}}}, {"phi", {{"ratio_p", 2.0}}}}},
                {"reaction", {{"kind", "logistic"}, {"k", 1.0}}}};
  }
  if (name.size() == 8 && name.rfind("example", 0) == 0 && name[7] >= '1' && name[7] <= '4') {
    const auto s = default_family_spec();
    json flux{{"kind", name}, {"u1", s.u1}, {"u2", s.u2}, {"c1", s.c1}, {"c2", s.c2}};
    if (name == "example4") {
      flux["lambda"] = s.lambda;
      flux["delta"] = s.delta;
      flux["kappa"] = s.kappa;
    }
    return json{{"flux", flux}, {"reaction", {{"kind", "logistic"}, {"k", s.k}}}};
  }
  parse_fail("unknown preset '" + name + "'");
}

void apply_param(json& doc, const std::string& preset, const std::string& key, double value) {
  json& flux = doc["flux"];
  if (key == "k") {
    doc["reaction"]["k"] = value;
  } else if (key == "eps" || key == "viscosity") {
    doc["viscosity"] = value;
  } else if (preset == "fisher" && key == "d") {
    flux["d"] = value;
  } else if (preset == "bounded" && (key == "d0" || key == "d2")) {
    flux["D"]["polynomial"][key == "d0" ? 0 : 2] = value;
  } else if (preset == "bounded" && key == "p") {
    flux["phi"]["ratio_p"] = value;
  } else if (preset.rfind("example", 0) == 0 &&
             (key == "u1" || key == "u2" || key == "c1" || key == "c2" || key == "lambda" || key == "delta" ||
              key == "kappa")) {
    flux[key] = value;
  } else if (preset.rfind("example", 0) == 0 && key == "p") {
    if (value > 0.0) flux["phi"] = {{"ratio_p", value}}; else flux["phi"] = "atan";
  } else if (preset.rfind("example", 0) == 0 && key == "smooth") {
    flux["smoothness"] = value != 0.0 ? "C2" : "C1";
  } else {
    parse_fail("parameter '" + key + "' does not apply to preset '" + preset + "'");
  }
}

LoadedModel load_document(const json& doc, const std::string& preset) {
  if (!doc.is_object()) parse_fail("config must be a JSON object");
  if (!doc.contains("flux")) parse_fail("config needs a 'flux' section");
  const json* reaction_json = doc.contains("reaction") ? &doc.at("reaction") : nullptr;
  Built built = build_flux(doc.at("flux"), reaction_json);
  ReactionModel reaction = reaction_json ? build_reaction(*reaction_json)
                                         : (built.reaction ? *built.reaction : ReactionModel::logistic(1.0));
  reaction.validate();

  std::optional<double> eps;
  FluxModel flux = built.flux;
  if (doc.contains("viscosity") && !doc.at("viscosity").is_null()) {
    if (!doc.at("viscosity").is_number() || !(doc.at("viscosity").get<double>() > 0.0)) {
      parse_fail("'viscosity' must be a positive number");
    }
    eps = doc.at("viscosity").get<double>();
    flux = with_viscosity(flux, *eps);
  }

  FluxClassification cls;
  try {
    cls = classify_flux(flux);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::symmetry_violation) throw HypothesisViolation("nc", e.what());
    throw;
  }
  for (int i = 0; i <= 64; ++i) {
    const double u = i / 64.0;
    if (std::isfinite(flux.omega_plus(u)) && std::isfinite(flux.a_plus(u))) {
      throw HypothesisViolation("hm", "bounded gradient domain with finite saturation");
    }
  }

  SolverOverrides solver;
  if (doc.contains("solver")) {
    const json& s = doc.at("solver");
    if (s.contains("rtol")) solver.rtol = number(s, "rtol", 0.0);
    if (s.contains("atol")) solver.atol = number(s, "atol", 0.0);
    if (s.contains("tol_sigma")) solver.tol_sigma = number(s, "tol_sigma", 0.0);
    if (s.contains("u_min")) solver.u_min = number(s, "u_min", 0.0);
  }
  return LoadedModel{flux, reaction, cls, eps, solver, preset, doc.dump()};
}

}  // namespace

bool is_preset(const std::string& name) {
  static const char* names[] = {"fisher", "bounded", "example1", "example2", "example3", "example4"};
  return std::find(std::begin(names), std::end(names), name) != std::end(names);
}

LoadedModel load_model(const std::string& config_text) {
  json doc;
  try {
    doc = json::parse(config_text);
  } catch (const json::parse_error& e) {
    parse_fail(std::string("invalid JSON: ") + e.what());
  }
  try {
    return load_document(doc, "");
  } catch (const json::exception& e) {
    parse_fail(e.what());
  }
}

LoadedModel load_model(const std::string& config_text, const std::vector<std::pair<std::string, double>>& params) {
  if (params.empty()) return load_model(config_text);
  json doc;
  try {
    doc = json::parse(config_text);
  } catch (const json::parse_error& e) {
    parse_fail(std::string("invalid JSON: ") + e.what());
  }
  try {
    if (!doc.is_object() || !doc.contains("flux")) parse_fail("config needs a 'flux' section");
    // file configs take the same keys as the preset their flux kind matches
    std::string family = doc.at("flux").value("kind", "");
    if (family == "linear") family = "fisher";
    for (const auto& [key, value] : params) apply_param(doc, family, key, value);
    return load_document(doc, "");
  } catch (const json::exception& e) {
    parse_fail(e.what());
  }
}

LoadedModel load_preset(const std::string& name, const std::vector<std::pair<std::string, double>>& params) {
  json doc = preset_document(name);
  for (const auto& [key, value] : params) apply_param(doc, name, key, value);
  try {
    return load_document(doc, name);
  } catch (const json::exception& e) {
    parse_fail(e.what());
  }
}

}  // namespace frontspeed
