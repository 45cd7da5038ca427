#include <benchmark/benchmark.h>

#include <algorithm>

#include "strf/convex.hpp"
#include "strf/rng.hpp"
#include "strf/rosenblatt.hpp"
#include "strf/spectra.hpp"

using namespace strf;

static void BM_PhiloxNormals(benchmark::State& state) {
  Stream rs(1, 2, 3);
  for (auto _ : state) benchmark::DoNotOptimize(rs.normal());
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_PhiloxNormals);

static void BM_AngularCoeffs(benchmark::State& state) {
  ModelParams p;
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(angular_coeffs(p, 10.0, n));
}
BENCHMARK(BM_AngularCoeffs)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond);

static void BM_TemporalEigs(benchmark::State& state) {
  ModelParams p;
  const double T = static_cast<double>(state.range(0));
  // node or basis counts the tool picks by default
  const int nodes = T <= 100 ? std::max(200, static_cast<int>(8 * T) + 40) : 120;
  for (auto _ : state) benchmark::DoNotOptimize(temporal_eigs(p, 0, T, 50, nodes));
}
BENCHMARK(BM_TemporalEigs)->Arg(10)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_RieszSpectrum(benchmark::State& state) {
  ModelParams p;
  for (auto _ : state) benchmark::DoNotOptimize(riesz_spectrum(p, 30, 50));
}
BENCHMARK(BM_RieszSpectrum)->Unit(benchmark::kMillisecond);

static void BM_SampleLimit(benchmark::State& state) {
  ModelParams p;
  const auto s = riesz_spectrum(p, 30, 50);
  for (auto _ : state) benchmark::DoNotOptimize(sample_S_infinity(s, 1000, 42));
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_SampleLimit)->Unit(benchmark::kMillisecond);

static void BM_ConvexSampler(benchmark::State& state) {
  ModelParams p;
  p.d = 1;
  p.alpha_s = 0.4;
  const auto K = make_box(2, 1.0);
  const auto g = make_spectral_grid(K, p, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(sample_convex_limit(K, p, g, 100, 42));
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_ConvexSampler)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
