#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "frontspeed/examples.hpp"
#include "frontspeed/halfplane.hpp"
#include "frontspeed/model.hpp"
#include "frontspeed/profile.hpp"
#include "frontspeed/speeds.hpp"

using namespace frontspeed;

namespace {

const LoadedModel& bounded() {
  static const LoadedModel m = load_preset("bounded");
  return m;
}

void BM_InvertSeparable(benchmark::State& state) {
  const auto& m = bounded();
  double u = 0.0;
  for (auto _ : state) {
    u += 1e-3;
    if (u >= 1.0) u = 1e-3;
    benchmark::DoNotOptimize(m.flux.invert(u, 0.5 * m.flux.a_plus(u)));
  }
}
BENCHMARK(BM_InvertSeparable);

void BM_InvertTabulated(benchmark::State& state) {
  std::vector<double> us, ss;
  for (int i = 0; i <= 32; ++i) us.push_back(i / 32.0);
  for (int j = 0; j <= 64; ++j) ss.push_back(j * 0.25);
  std::vector<std::vector<double>> vals;
  for (double u : us) {
    std::vector<double> row;
    for (double s : ss) row.push_back((1.0 + u) * s / std::sqrt(1.0 + s * s));
    vals.push_back(row);
  }
  const auto m = FluxModel::tabulated(us, ss, vals);
  double u = 0.0;
  for (auto _ : state) {
    u += 1e-3;
    if (u >= 1.0) u = 1e-3;
    benchmark::DoNotOptimize(m.invert(u, 0.5 * m.a_plus(u)));
  }
}
BENCHMARK(BM_InvertTabulated);

void BM_IntegrateFisher(benchmark::State& state) {
  const auto m = FluxModel::linear(1.0);
  const auto r = ReactionModel::logistic(1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate_halfplane(m, r, 2.5, SolveMode::extended).V0);
  }
}
BENCHMARK(BM_IntegrateFisher)->Unit(benchmark::kMillisecond);

void BM_IntegrateExample4(benchmark::State& state) {
  const auto e = make_example4(default_family_spec());
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate_halfplane(e.flux, e.reaction, 0.5, SolveMode::extended).V0);
  }
}
BENCHMARK(BM_IntegrateExample4)->Unit(benchmark::kMillisecond);

void BM_FindSigmaS(benchmark::State& state) {
  const auto& m = bounded();
  for (auto _ : state) benchmark::DoNotOptimize(find_sigma_s(m.flux, m.reaction).sigma);
}
BENCHMARK(BM_FindSigmaS)->Unit(benchmark::kMillisecond);

void BM_FindSigmaSFisher(benchmark::State& state) {
  const auto m = FluxModel::linear(1.0);
  const auto r = ReactionModel::logistic(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(find_sigma_s(m, r).sigma);
}
BENCHMARK(BM_FindSigmaSFisher)->Unit(benchmark::kMillisecond);

void BM_BuildProfile(benchmark::State& state) {
  const auto m = FluxModel::linear(1.0);
  const auto r = ReactionModel::logistic(1.0);
  const auto sol = integrate_halfplane(m, r, 2.5, SolveMode::extended);
  const auto grid = uniform_grid(-20.0, 20.0, 1e-2);
  for (auto _ : state) {
    const auto G = build_G(m, sol);
    benchmark::DoNotOptimize(invert_profile(G, grid).u.back());
  }
}
BENCHMARK(BM_BuildProfile)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
