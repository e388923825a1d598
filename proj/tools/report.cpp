#include "report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "frontspeed/errors.hpp"
#include "frontspeed/examples.hpp"
#include "frontspeed/model.hpp"
#include "frontspeed/pde_oracle.hpp"
#include "frontspeed/profile.hpp"
#include "frontspeed/speeds.hpp"
#include "json.hpp"

namespace frontspeed::cli {

using nlohmann::json;
namespace fs = std::filesystem;

int exit_code_for(const std::exception& e) {
  const auto* err = dynamic_cast<const Error*>(&e);
  if (!err) return kFailure;
  switch (err->code()) {
    case ErrorCode::parse_error:
    case ErrorCode::invalid_argument:
      return kParse;
    case ErrorCode::hypothesis_violation:
    case ErrorCode::spec_violation:
    case ErrorCode::symmetry_violation:
      return kHypothesis;
    case ErrorCode::bracket_not_closed:
    case ErrorCode::root_not_bracketed:
      return kBracket;
    default:
      return kFailure;
  }
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12e", x);
  return buf;
}

std::vector<std::pair<std::string, double>> parse_params(const std::vector<std::string>& items) {
  std::vector<std::pair<std::string, double>> out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw Error(ErrorCode::parse_error, "expected key=value, got '" + item + "'");
    const std::string value = item.substr(eq + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != value.size() || value.empty()) {
      throw Error(ErrorCode::parse_error, "value of '" + item.substr(0, eq) + "' is not a number");
    }
    out.emplace_back(item.substr(0, eq), v);
  }
  return out;
}

namespace {

using Clock = std::chrono::steady_clock;

std::string csv_row(std::initializer_list<double> xs) {
  std::string line;
  for (double x : xs) {
    if (!line.empty()) line += ',';
    line += format_number(x);
  }
  return line + '\n';
}

class Manifest {
 public:
  Manifest(std::string command, const GlobalOptions& g) : start_(Clock::now()), dir_(g.out) {
    doc_["command"] = std::move(command);
    doc_["model"] = g.model;
    doc_["params"] = g.params;
    doc_["lambda"] = g.lambda ? json(*g.lambda) : json(nullptr);
    doc_["seed"] = g.seed;
    doc_["threads"] = g.threads;
    doc_["outputs"] = json::array();
    fs::create_directories(dir_);
  }

  json& doc() { return doc_; }

  void write(const std::string& name, const std::string& content) {
    const fs::path path = fs::path(dir_) / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::invalid_argument, "cannot write " + path.string());
    f << content;
    doc_["outputs"].push_back(path.generic_string());
  }

  void finish() {
    doc_["wall_time_s"] = std::chrono::duration<double>(Clock::now() - start_).count();
    const fs::path path = fs::path(dir_) / "manifest.json";
    std::ofstream f(path, std::ios::binary);
    f << doc_.dump(2) << '\n';
  }

 private:
  Clock::time_point start_;
  std::string dir_;
  json doc_;
};

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::parse_error, "cannot read model file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

LoadedModel resolve_model(const GlobalOptions& g) {
  auto params = parse_params(g.params);
  if (g.lambda) params.emplace_back("lambda", *g.lambda);
  if (is_preset(g.model)) return load_preset(g.model, params);
  return load_model(read_file(g.model), params);
}

SpeedSearchOptions search_options(const LoadedModel& lm, const GlobalOptions& g) {
  SpeedSearchOptions o;
  if (lm.solver.tol_sigma) o.tol_sigma = *lm.solver.tol_sigma;
  if (g.tol) o.tol_sigma = *g.tol;
  if (lm.solver.rtol) o.integration.rtol = *lm.solver.rtol;
  if (lm.solver.atol) o.integration.atol = *lm.solver.atol;
  if (lm.solver.u_min) o.integration.u_min = *lm.solver.u_min;
  if (!(o.tol_sigma > 0.0)) throw Error(ErrorCode::invalid_argument, "--tol must be positive");
  return o;
}

void record_model(Manifest& man, const LoadedModel& lm, const SpeedSearchOptions& o) {
  man.doc()["config"] = json::parse(lm.config_json);
  man.doc()["preset"] = lm.preset;
  man.doc()["tolerances"] = {{"tol_sigma", o.tol_sigma},
                             {"rtol", o.integration.rtol},
                             {"atol", o.integration.atol},
                             {"u_min", o.integration.u_min}};
}

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
}

}  // namespace

int run_speeds(const GlobalOptions& g, const SpeedsArgs& a, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto lm = resolve_model(g);
    const auto opts = search_options(lm, g);
    Manifest man("speeds", g);
    record_model(man, lm, opts);
    const auto rep = compute_speeds(lm.flux, lm.reaction, opts, !a.skip_sigma_r);
    man.write("speeds.json", to_json(rep) + "\n");
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s: sigma_s=%.6f lower_bound=%.6f", rep.model_name.c_str(), rep.sigma_s,
                  rep.lower_bound);
    out << buf;
    if (rep.sigma_r) {
      std::snprintf(buf, sizeof buf, " sigma_r=%.6f (%s)", *rep.sigma_r, to_string(rep.attainment).c_str());
      out << buf;
      const double gap = *rep.sigma_r - rep.sigma_s;
      if (gap > 2.0 * opts.tol_sigma) {
        std::snprintf(buf, sizeof buf, " FLAG sigma_s < sigma_r gap=%.6f", gap);
        out << buf;
      }
    } else {
      out << " sigma_r=n/a (" << rep.sigma_r_note << ")";
    }
    out << '\n';
    man.finish();
    return int{kOk};
  });
}

int run_profile(const GlobalOptions& g, const ProfileArgs& a, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto lm = resolve_model(g);
    const auto opts = search_options(lm, g);
    const auto s = find_sigma_s(lm.flux, lm.reaction, opts);
    const double sigma = a.sigma.value_or(s.hi);
    if (sigma < s.sigma - opts.tol_sigma) {
      char buf[256];
      std::snprintf(buf, sizeof buf,
                    "error: sigma=%.6f is below sigma_s=%.6f; no profile vanishes at 0. Use --sigma >= %.6f\n",
                    sigma, s.sigma, s.hi);
      err << buf;
      return int{kBelowSigmaS};
    }
    Manifest man("profile", g);
    record_model(man, lm, opts);

    // profiles are differenced downstream, so solve tighter than the search
    IntegrationOptions io = opts.integration;
    io.rtol = std::min(io.rtol, 1e-12);
    io.atol = std::min(io.atol, 1e-16);
    const double sigma_used = std::max(sigma, s.hi);
    auto sol = integrate_halfplane(lm.flux, lm.reaction, sigma_used, SolveMode::extended, io);
    if (!vanishes_at_zero(sol)) sol = integrate_halfplane(lm.flux, lm.reaction, sigma_used, SolveMode::extended);
    const double anchor = a.anchor.value_or(default_anchor(lm.flux, sol));
    const auto G = build_G(lm.flux, sol, anchor);

    const double half = a.window.value_or(std::min(100.0, std::max(-G.G_front(), G.G_back())));
    const auto grid = uniform_grid(-half, half, a.h);
    const auto p = invert_profile(G, grid);
    const auto checks = check_jumps(p, lm.flux, sigma_used, 1e-6 * std::max(1.0, sigma_used));

    std::string csv = "xi,u,is_jump\n";
    for (std::size_t i = 0; i < p.xi.size(); ++i) {
      csv += format_number(p.xi[i]) + "," + format_number(p.u[i]) + "," + (p.is_jump[i] ? "1" : "0") + "\n";
    }
    man.write("profile.csv", csv);
    std::string jumps = "xi_k,mu,nu,rh_residual,bdp_margin\n";
    for (const auto& j : checks.jumps) jumps += csv_row({j.xi, j.mu, j.nu, j.rh_residual, j.bdp_margin});
    man.write("jumps.csv", jumps);

    json cj;
    cj["sigma"] = sigma;
    cj["sigma_used"] = sigma_used;
    cj["sigma_s"] = s.sigma;
    cj["anchor"] = anchor;
    cj["kind"] = to_string(p.kind);
    cj["plateaus"] = G.plateaus().size();
    cj["many_plateaus_flag"] = G.plateaus().size() > 8;
    cj["diverges_low"] = G.diverges_low();
    cj["diverges_high"] = G.diverges_high();
    cj["tol"] = checks.tol;
    cj["rh_ok"] = checks.rh_ok;
    cj["bdp_ok"] = checks.bdp_ok;
    cj["h_continuity_ok"] = checks.h_ok;
    cj["jumps"] = json::array();
    for (const auto& j : checks.jumps) {
      cj["jumps"].push_back({{"xi", j.xi},
                             {"mu", j.mu},
                             {"nu", j.nu},
                             {"rh_residual", j.rh_residual},
                             {"bdp_margin", j.bdp_margin},
                             {"h_residual", j.h_residual}});
    }
    if (p.kind == ProfileKind::classic) {
      const auto res = residual_classic(G, lm.flux, lm.reaction, -half, half, a.h);
      cj["classic_residual"] = {{"max_abs", res.max_abs}, {"worst_xi", res.worst_xi}, {"points", res.points}};
    }
    man.write("checks.json", cj.dump(2) + "\n");

    char buf[256];
    std::snprintf(buf, sizeof buf, "profile sigma=%.6f kind=%s jumps=%zu rh_ok=%d bdp_ok=%d\n", sigma_used,
                  to_string(p.kind).c_str(), checks.jumps.size(), checks.rh_ok ? 1 : 0, checks.bdp_ok ? 1 : 0);
    out << buf;
    man.finish();
    return int{kOk};
  });
}

int run_sweep(const GlobalOptions& g, const SweepArgs& a, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (a.eps.empty()) throw Error(ErrorCode::invalid_argument, "sweep needs a nonempty --eps list");
    std::vector<double> eps = a.eps;
    for (double e : eps) {
      if (!(e > 0.0)) throw Error(ErrorCode::invalid_argument, "viscosities must be positive");
    }
    std::sort(eps.begin(), eps.end(), std::greater<>());
    eps.erase(std::unique(eps.begin(), eps.end()), eps.end());

    const auto lm = resolve_model(g);
    const auto opts = search_options(lm, g);
    Manifest man("sweep", g);
    record_model(man, lm, opts);
    const auto sw = viscosity_sweep(lm.flux, lm.reaction, eps, opts, g.threads);

    std::string csv = "eps,sigma,lo,hi,monotone\n";
    for (const auto& row : sw.rows) {
      csv += format_number(row.eps) + "," + format_number(row.sigma) + "," + format_number(row.lo) + "," +
             format_number(row.hi) + "," + (row.monotone ? "1" : "0") + "\n";
    }
    man.write("sweep.csv", csv);

    json sj;
    sj["monotone"] = sw.monotone;
    sj["extrapolation"] = {{"limit", sw.extrapolation.limit},
                           {"error", sw.extrapolation.error},
                           {"order", sw.extrapolation.order},
                           {"richardson", sw.extrapolation.richardson}};
    try {
      const auto s = find_sigma_s(lm.flux, lm.reaction, opts);
      const double diff = std::abs(sw.extrapolation.limit - s.sigma);
      sj["sigma_s_direct"] = s.sigma;
      sj["difference"] = diff;
      sj["agrees"] = diff <= 5.0 * opts.tol_sigma + sw.extrapolation.error;
    } catch (const Error& e) {
      sj["sigma_s_direct"] = nullptr;
      sj["note"] = e.what();
    }
    man.write("sweep.json", sj.dump(2) + "\n");
    char buf[200];
    std::snprintf(buf, sizeof buf, "sweep rows=%zu monotone=%d limit=%.6f +- %.2e\n", sw.rows.size(),
                  sw.monotone ? 1 : 0, sw.extrapolation.limit, sw.extrapolation.error);
    out << buf;
    man.finish();
    return int{kOk};
  });
}

int run_validate(const GlobalOptions& g, const ValidateArgs& a, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto lm = resolve_model(g);
    const auto opts = search_options(lm, g);
    Manifest man("validate", g);
    record_model(man, lm, opts);
    SimGrid grid;
    grid.h = a.h;
    grid.L = a.L;
    grid.T = a.T;
    grid.x0 = -a.L / 2.0;
    const auto traj = simulate_front(lm.flux, lm.reaction, grid);
    const auto fit = measure_speed(traj);
    const auto s = find_sigma_s(lm.flux, lm.reaction, opts);
    const double rel = std::abs(fit.mean - s.sigma) / s.sigma;
    const bool pass = rel <= a.speed_tol && fit.spread <= a.spread_tol;

    man.write("trajectory.csv", trajectory_csv(traj));
    json vj;
    vj["pde_speed"] = fit.mean;
    vj["per_level"] = {{"0.1", fit.speed[0]}, {"0.5", fit.speed[1]}, {"0.9", fit.speed[2]}};
    vj["stderr"] = {fit.stderr_[0], fit.stderr_[1], fit.stderr_[2]};
    vj["spread"] = fit.spread;
    vj["sigma_s"] = s.sigma;
    vj["relative_error"] = rel;
    vj["speed_tol"] = a.speed_tol;
    vj["spread_tol"] = a.spread_tol;
    vj["pass"] = pass;
    vj["grid"] = {{"h", a.h}, {"L", a.L}, {"T", a.T}, {"dt", traj.dt}, {"steps", traj.steps}};
    vj["clipped"] = traj.clipped;
    vj["warnings"] = traj.warnings;
    man.write("validate.json", vj.dump(2) + "\n");
    char buf[200];
    std::snprintf(buf, sizeof buf, "validate pde=%.6f sigma_s=%.6f rel=%.4f spread=%.4f %s\n", fit.mean, s.sigma,
                  rel, fit.spread, pass ? "PASS" : "FAIL");
    out << buf;
    man.finish();
    return pass ? int{kOk} : int{kFailure};
  });
}

namespace {

DegenerateFamilySpec family_from(const std::vector<std::pair<std::string, double>>& params, double& lambda_small,
                                 double& lambda_large) {
  auto s = default_family_spec();
  for (const auto& [k, v] : params) {
    if (k == "u1") s.u1 = v;
    else if (k == "u2") s.u2 = v;
    else if (k == "c1") s.c1 = v;
    else if (k == "c2") s.c2 = v;
    else if (k == "k") s.k = v;
    else if (k == "delta") s.delta = v;
    else if (k == "kappa") s.kappa = v;
    else if (k == "p") s.phi_p = v;
    else if (k == "smooth") s.c2_smooth = v != 0.0;
    else if (k == "lambda_small" || k == "lambda") lambda_small = v;
    else if (k == "lambda_large") lambda_large = v;
    else throw Error(ErrorCode::parse_error, "unknown example parameter '" + k + "'");
  }
  return s;
}

json stall_json(const std::vector<LevelSample>& samples) {
  json arr = json::array();
  for (const auto& l : samples) arr.push_back({{"sigma", l.sigma}, {"alpha", l.alpha}, {"beta", l.beta}});
  return arr;
}

}  // namespace

int run_example(const GlobalOptions& g, const ExampleArgs& a, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (a.n < 1 || a.n > 4) throw Error(ErrorCode::invalid_argument, "--n must be 1, 2, 3 or 4");
    double lambda_small = kSmallLambda, lambda_large = kLargeLambda;
    auto params = parse_params(g.params);
    if (g.lambda) params.emplace_back("lambda", *g.lambda);
    auto spec = family_from(params, lambda_small, lambda_large);
    spec.lambda = 0.0;
    validate_family_spec(spec, a.n == 4);
    SpeedSearchOptions opts;
    if (g.tol) opts.tol_sigma = *g.tol;

    Manifest man("example", g);
    man.doc()["family"] = {{"u1", spec.u1}, {"u2", spec.u2}, {"c1", spec.c1}, {"c2", spec.c2}, {"k", spec.k},
                           {"p", spec.phi_p}, {"smooth", spec.c2_smooth}, {"delta", spec.delta},
                           {"kappa", spec.kappa}, {"lambda_small", lambda_small}, {"lambda_large", lambda_large}};
    json ej;
    ej["example"] = a.n;
    std::string stall_csv = "sigma,alpha,beta\n";

    if (a.n == 1 || a.n >= 3) {
      const auto ex = make_example(a.n == 1 ? 1 : 3, spec);
      const auto cv = characteristic_values(ex, spec, a.sigmas, opts.integration);
      ej["tau"] = cv.tau;
      ej["sigma_tilde"] = cv.sigma_tilde;
      ej["stall"] = stall_json(cv.samples);
      for (const auto& l : cv.samples) stall_csv += csv_row({l.sigma, l.alpha, l.beta});
      man.write("stall.csv", stall_csv);
    }
    if (a.n >= 2) {
      const auto ex2 = make_example(2, spec);
      const auto s2 = find_sigma_s(ex2.flux, ex2.reaction, opts);
      ej["sigma_s_example2"] = s2.sigma;
      ej["lower_bound"] = s2.lower_bound;
      ej["example2_pulled"] = s2.at_lower_bound;
    }
    if (a.n >= 3) {
      const auto ex3 = make_example(3, spec);
      const auto s3 = find_sigma_s(ex3.flux, ex3.reaction, opts);
      const auto sol = integrate_halfplane(ex3.flux, ex3.reaction, s3.hi, SolveMode::extended, opts.integration);
      ej["sigma_bar"] = s3.sigma;
      ej["sigma_bar_bracket"] = {s3.lo, s3.hi};
      if (auto line = saturated_line(sol)) {
        ej["gamma"] = line->gamma;
        ej["alpha"] = line->alpha;
        ej["line_c"] = line->c;
      }
      if (a.n == 4) {
        spec.lambda = lambda_small;
        const auto small = make_example4(spec);
        spec.lambda = lambda_large;
        const auto large = make_example4(spec);
        auto regime = [&](const ExampleModel& e, double lambda) {
          const auto rep = compute_speeds(e.flux, e.reaction, opts, true);
          json r{{"lambda", lambda}, {"sigma_s", rep.sigma_s}};
          r["sigma_r"] = rep.sigma_r ? json(*rep.sigma_r) : json(nullptr);
          r["attainment"] = to_string(rep.attainment);
          r["gap"] = rep.sigma_r ? json(*rep.sigma_r - rep.sigma_s) : json(nullptr);
          r["sigma_s_equals_sigma_bar"] = std::abs(rep.sigma_s - s3.sigma) <= 2.0 * opts.tol_sigma;
          return r;
        };
        ej["small"] = regime(small, lambda_small);
        ej["large"] = regime(large, lambda_large);

        const auto G = build_G(small.flux, sol, default_anchor(small.flux, sol));
        const auto p = invert_profile(G, uniform_grid(-50.0, 50.0, 1e-2));
        const auto cs = check_jumps(p, small.flux, sol.sigma, 1e-6);
        const auto cl = check_jumps(p, large.flux, sol.sigma, 1e-6);
        ej["sigma_bar_profile"] = {{"jumps", p.saturation_points.size()},
                                   {"rh_small", cs.jumps.empty() ? 0.0 : cs.jumps[0].rh_residual},
                                   {"bdp_small", cs.jumps.empty() ? 0.0 : cs.jumps[0].bdp_margin},
                                   {"rh_large", cl.jumps.empty() ? 0.0 : cl.jumps[0].rh_residual},
                                   {"bdp_large", cl.jumps.empty() ? 0.0 : cl.jumps[0].bdp_margin}};

        std::string curves = "u,D,D_small,D_large,Upsilon\n";
        for (int i = 0; i <= 1000; ++i) {
          const double u = i / 1000.0;
          curves += csv_row({u, ex3.flux.a_plus(u), small.flux.a_plus(u), large.flux.a_plus(u),
                             u >= sol.u_end ? sol.V_at(u) : 0.0});
        }
        man.write("curves.csv", curves);
      }
    }
    man.write("example.json", ej.dump(2) + "\n");
    out << ej.dump() << '\n';
    man.finish();
    return int{kOk};
  });
}

}  // namespace frontspeed::cli
