#include <benchmark/benchmark.h>

#include "ramcong/classifier.hpp"
#include "ramcong/tau.hpp"

using namespace ramcong;

static void BM_TauTable(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(tau_table(static_cast<std::uint64_t>(state.range(0))));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_TauTable)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Unit(benchmark::kMillisecond);

static void BM_OracleBuild(benchmark::State& state) {
  const auto f = sigma_function(0);
  for (auto _ : state) {
    ValuationOracle o(f, 2, static_cast<std::uint64_t>(state.range(0)));
    benchmark::DoNotOptimize(o.dense_bound());
  }
}
BENCHMARK(BM_OracleBuild)->Arg(1 << 20)->Arg(1 << 24)->Unit(benchmark::kMillisecond);

static void BM_GridScan(benchmark::State& state) {
  const std::uint64_t A_max = static_cast<std::uint64_t>(state.range(0));
  const std::uint64_t horizon = 10'000;
  const auto oracle = grid_oracle(sigma_function(0), 2, A_max, horizon);
  for (auto _ : state) benchmark::DoNotOptimize(grid_scan(oracle, A_max, horizon));
  state.counters["cells"] = static_cast<double>(A_max * (A_max + 1) / 2);
}
BENCHMARK(BM_GridScan)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

static void BM_EvalValuation(benchmark::State& state) {
  const auto f = sigma_function(3);
  std::uint64_t n = 1'000'003;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval_valuation(f, 2, n));
    n += 2;
  }
}
BENCHMARK(BM_EvalValuation);

static void BM_Certify(benchmark::State& state) {
  EngineConfig c;
  c.n_horizon = 20'000;
  const auto f = sigma_function(1);
  for (auto _ : state) benchmark::DoNotOptimize(certify_congruence(f, 2, 2, 36, 27, c));
}
BENCHMARK(BM_Certify)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
