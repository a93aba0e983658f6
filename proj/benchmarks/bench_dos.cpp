#include <benchmark/benchmark.h>

#include "rdm/bh_dos.hpp"
#include "rdm/hs_dos.hpp"
#include "rdm/thermo.hpp"

using namespace rdm;

static void BM_HsTableExact(benchmark::State& state) {
  const auto s = linear_spectrum(static_cast<int>(state.range(0)), Rational(1));
  for (auto _ : state) benchmark::DoNotOptimize(hs_coefficients(s, Arithmetic::Exact));
}
BENCHMARK(BM_HsTableExact)->DenseRange(2, 8, 2)->Unit(benchmark::kMillisecond);

static void BM_HsEvaluate(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const auto t = hs_coefficients(linear_spectrum(d, Rational(1)));
  double e = 0.37 * (d - 1);
  for (auto _ : state) benchmark::DoNotOptimize(hs_log_omega_integrated(t, e));
}
BENCHMARK(BM_HsEvaluate)->DenseRange(2, 8, 2)->Unit(benchmark::kMicrosecond);

static void BM_BhOmega(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const BhIntegrandContext ctx(linear_spectrum(d, 1.0), {.method = static_cast<BhMethod>(state.range(1))});
  const double e = 0.37 * (d - 1);
  for (auto _ : state) benchmark::DoNotOptimize(bh_log_omega_integrated(ctx, e));
}
BENCHMARK(BM_BhOmega)
    ->ArgsProduct({{2, 4, 6, 8}, {static_cast<long>(BhMethod::Cut), static_cast<long>(BhMethod::Contour)}})
    ->Unit(benchmark::kMicrosecond);

static void BM_EnergyVariance(benchmark::State& state) {
  const auto s = linear_spectrum(4, 1.0);
  const auto builder = dos_builder(static_cast<Ensemble>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(energy_variance(builder, s, 1.1));
}
BENCHMARK(BM_EnergyVariance)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);
