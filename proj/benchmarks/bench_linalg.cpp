#include <benchmark/benchmark.h>

#include <random>

#include "dyca/linalg.hpp"

namespace {

dyca::Matrix random_spd(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  dyca::Matrix g(n, n);
  for (double& x : g.data()) x = normal(rng);
  dyca::Matrix s = dyca::times_transpose(g, g);
  for (std::size_t i = 0; i < n; ++i) s(i, i) += static_cast<double>(n);
  return s;
}

void BM_Cholesky(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const dyca::Matrix a = random_spd(n, 1);
  for (auto _ : state) benchmark::DoNotOptimize(dyca::cholesky(a));
}
BENCHMARK(BM_Cholesky)->Arg(10)->Arg(25)->Arg(64);

void BM_SymEig(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const dyca::Matrix a = random_spd(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(dyca::sym_eig(a));
}
BENCHMARK(BM_SymEig)->Arg(10)->Arg(25)->Arg(64);

void BM_GenSymEig(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const dyca::Matrix a = random_spd(n, 3);
  const dyca::Matrix b = random_spd(n, 4);
  for (auto _ : state) benchmark::DoNotOptimize(dyca::gen_sym_eig(a, b));
}
BENCHMARK(BM_GenSymEig)->Arg(10)->Arg(25)->Arg(64);

}  // namespace
