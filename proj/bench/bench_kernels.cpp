#include <benchmark/benchmark.h>

#include "ewc/brownian.hpp"
#include "ewc/fit.hpp"
#include "ewc/sampling.hpp"

namespace {

const ewc::EwcParams kParams(0.0, ewc::kPi / 2, 2.0 / 3, 1.0 / 3);

ewc::Execution mode(const benchmark::State& state) {
  return state.range(0) == 0 ? ewc::Execution::serial : ewc::Execution::parallel;
}

void BM_Loglik(benchmark::State& state) {
  const ewc::fit::Dataset data(ewc::sample_ewc_rejection(kParams, 1 << 20, 7).angles);
  const ewc::fit::LogLikelihood ll(data);
  for (auto _ : state) benchmark::DoNotOptimize(ll(kParams, mode(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(data.size()));
}
BENCHMARK(BM_Loglik)->Arg(0)->Arg(1)->ArgNames({"parallel"})->Unit(benchmark::kMillisecond);

void BM_OracleEqual(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(ewc::oracle::conditional_equal_sample(kParams, 20000, 0.05, 3, mode(state)));
}
BENCHMARK(BM_OracleEqual)->Arg(0)->Arg(1)->ArgNames({"parallel"})->Unit(benchmark::kMillisecond);

void BM_OracleWalk(benchmark::State& state) {
  ewc::oracle::WalkConfig cfg;
  for (auto _ : state)
    benchmark::DoNotOptimize(ewc::oracle::conditional_exit_sample(kParams, 200, cfg, 3, mode(state)));
}
BENCHMARK(BM_OracleWalk)->Arg(0)->Arg(1)->ArgNames({"parallel"})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
