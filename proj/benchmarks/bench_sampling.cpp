#include <benchmark/benchmark.h>

#include "rdm/sampling.hpp"

using namespace rdm;

static void BM_SampleEnergy(benchmark::State& state) {
  const auto flat = linear_spectrum(static_cast<int>(state.range(1)), 1.0).flattened();
  const auto ens = static_cast<Ensemble>(state.range(0));
  auto rng = chunk_rng(1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(sample_energy(ens, flat, rng));
}
BENCHMARK(BM_SampleEnergy)->ArgsProduct({{0, 1, 2}, {2, 5, 8}});

static void BM_HaarUnitary(benchmark::State& state) {
  auto rng = chunk_rng(1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(haar_unitary(static_cast<int>(state.range(0)), rng));
}
BENCHMARK(BM_HaarUnitary)->RangeMultiplier(2)->Range(2, 16);
BENCHMARK_MAIN();
