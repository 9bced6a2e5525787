// Serial against OpenMP path generation for the Monte Carlo oracle.

#include <benchmark/benchmark.h>

#include "bessel_like/mc.hpp"

using namespace bessel_like;

namespace {

const DriftSpec& ex1() {
  static const DriftSpec spec = make_example(ExampleId::ex1, {});
  return spec;
}

void BM_PathsSerial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(simulate_paths(ex1(), 0.0, 1.0, n, 1e-3, 7).endpoints.data());
  state.SetItemsProcessed(state.iterations() * n * 1000);
}

void BM_PathsParallel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(simulate_paths_parallel(ex1(), 0.0, 1.0, n, 1e-3, 7).endpoints.data());
  state.SetItemsProcessed(state.iterations() * n * 1000);
}

}  // namespace

BENCHMARK(BM_PathsSerial)->Arg(1 << 12)->Arg(1 << 15)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PathsParallel)->Arg(1 << 12)->Arg(1 << 15)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
