#include <benchmark/benchmark.h>

#include "aicsel/estimation.hpp"
#include "aicsel/selection.hpp"

namespace {

using namespace aicsel;

PIState perturbed(int n) {
  SweepConfig c;
  c.nQubits = n;
  c.q = 0.02;
  c.base = ThreeParamState{n, 0.0, 0.0, 1.0};
  c.baseSeed = 5;
  return true_state(c, 0);
}

void BM_OutcomeTable(benchmark::State& state) {
  const int n = int(state.range(0));
  const PIState s = perturbed(n);
  const auto plan = generate_plan(n);
  const SettingRotations rot(n, plan.settings);
  const auto w = s.weighted_blocks();
  for (auto _ : state) benchmark::DoNotOptimize(outcome_table(w, rot));
  state.counters["settings"] = double(plan.settings.size());
}
BENCHMARK(BM_OutcomeTable)->Arg(5)->Arg(10)->Arg(25)->Unit(benchmark::kMillisecond);

void BM_SampleDataset(benchmark::State& state) {
  const int n = int(state.range(0));
  const PIState s = perturbed(n);
  const auto plan = generate_plan(n);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_dataset(s, plan, 100 * plan.settings.size(), ++seed));
  }
}
BENCHMARK(BM_SampleDataset)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_LogLikelihoodPI(benchmark::State& state) {
  const int n = int(state.range(0));
  const PIState s = perturbed(n);
  const auto data = sample_dataset(s, generate_plan(n), 100 * setting_count(n), 3);
  for (auto _ : state) benchmark::DoNotOptimize(log_likelihood(s, data));
}
BENCHMARK(BM_LogLikelihoodPI)->Arg(5)->Arg(10)->Arg(25)->Unit(benchmark::kMillisecond);

void BM_FitThreeParam(benchmark::State& state) {
  const int n = int(state.range(0));
  const auto data = sample_dataset(perturbed(n), generate_plan(n), 100 * setting_count(n), 3);
  for (auto _ : state) benchmark::DoNotOptimize(fit_three_param(data));
}
BENCHMARK(BM_FitThreeParam)->Arg(5)->Arg(10)->Arg(25)->Unit(benchmark::kMillisecond);

void BM_FitPi(benchmark::State& state) {
  const int n = int(state.range(0));
  const auto data = sample_dataset(perturbed(n), generate_plan(n), 100 * setting_count(n), 3);
  int iterations = 0;
  for (auto _ : state) {
    const auto fit = fit_pi(data);
    iterations = fit.iterations;
    benchmark::DoNotOptimize(fit.logLikelihood);
  }
  state.counters["iterations"] = iterations;
}
BENCHMARK(BM_FitPi)->Arg(4)->Arg(5)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
