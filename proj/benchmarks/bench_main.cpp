#include <benchmark/benchmark.h>

#include "cvlink/sampling.hpp"
#include "cvlink/scenario.hpp"
#include "cvlink/spectral.hpp"

namespace {

using namespace cvlink;

ScenarioConfig paper_scenario() {
  ScenarioConfig config;
  config.source = FixedSourceVariances{0.14864388003906614, 1.0 / 0.14864388003906614};
  return config;
}

void BM_Evaluate(benchmark::State& state) {
  const ScenarioConfig config = paper_scenario();
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate(config));
  }
}
BENCHMARK(BM_Evaluate);

void BM_AnalyticVariances(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(analytic_variances(0.149, 6.73, 0.7216, 0.9, 0.938));
  }
}
BENCHMARK(BM_AnalyticVariances);

void BM_OptimizeVbs(benchmark::State& state) {
  const ScenarioConfig config = paper_scenario();
  for (auto _ : state) {
    benchmark::DoNotOptimize(optimize_vbs(config));
  }
}
BENCHMARK(BM_OptimizeVbs);

void BM_SpectrumSweep(benchmark::State& state) {
  ScenarioConfig config;  // default pump model
  const FrequencyGrid grid(0.5, 30.0, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(spectrum_sweep(config, grid));
  }
}
BENCHMARK(BM_SpectrumSweep)->Arg(60)->Arg(240);

void BM_EstimateJointVariance(benchmark::State& state) {
  ScenarioConfig config = paper_scenario();
  config.vbs_t = resolve_vbs_t(config);
  config.vbs_setting = VbsSetting::explicit_t;
  const GaussianState built = build_state(config);
  const JointCombination combo = quadrature_sum(0, 1);
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate_joint_variance(built, combo, n, 42));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(n));
}
BENCHMARK(BM_EstimateJointVariance)->Arg(10000)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
