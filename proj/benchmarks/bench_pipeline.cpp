#include <benchmark/benchmark.h>

#include <cmath>

#include "dyca/dyca_all.hpp"

namespace {

const dyca::TimeSeries& observed() {
  static const dyca::TimeSeries q = dyca::embed(dyca::simulate_rossler({}, {}), {}, 2);
  return q;
}

void BM_SimulateRossler(benchmark::State& state) {
  dyca::IntegrationSpec spec;
  spec.t_end = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(dyca::simulate_rossler({}, spec));
}
BENCHMARK(BM_SimulateRossler)->Arg(600)->Arg(2100)->Unit(benchmark::kMillisecond);

void BM_CorrelationTriple(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(dyca::correlation_triple(observed()));
}
BENCHMARK(BM_CorrelationTriple)->Unit(benchmark::kMillisecond);

void BM_FitAndProject(benchmark::State& state) {
  const dyca::CorrelationTriple triple = dyca::correlation_triple(observed());
  for (auto _ : state) {
    const dyca::DycaProjection p = dyca::build_projection(dyca::fit(triple), triple);
    benchmark::DoNotOptimize(dyca::project(observed(), p));
  }
}
BENCHMARK(BM_FitAndProject)->Unit(benchmark::kMillisecond);

void BM_Windows(benchmark::State& state) {
  dyca::FitOptions options;
  options.threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(dyca::dyca_windows(observed(), {1000, 500}, options));
}
BENCHMARK(BM_Windows)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_Bandpass(benchmark::State& state) {
  const auto samples = static_cast<std::size_t>(state.range(0));
  dyca::Matrix x(32, samples);
  for (std::size_t c = 0; c < 32; ++c)
    for (std::size_t k = 0; k < samples; ++k) x(c, k) = std::sin(0.01 * static_cast<double>((c + 1) * k));
  const dyca::TimeSeries ts(x, 1.0 / 256.0);
  for (auto _ : state) benchmark::DoNotOptimize(dyca::bandpass_zero_phase(ts, {}));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(32 * samples));
}
BENCHMARK(BM_Bandpass)->Arg(256 * 10)->Arg(256 * 60)->Unit(benchmark::kMillisecond);

void BM_Pca(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(dyca::pca(observed(), 3));
}
BENCHMARK(BM_Pca)->Unit(benchmark::kMillisecond);

void BM_FastIca(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(dyca::fastica(observed(), 3, {.seed = 1}));
}
BENCHMARK(BM_FastIca)->Unit(benchmark::kMillisecond);

}  // namespace
