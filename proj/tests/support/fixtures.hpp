#pragma once

// Shared synthetic datasets for the unit and acceptance tests.

#include <cstdint>
#include <map>
#include <random>

#include "dyca/dynsys.hpp"
#include "dyca/signal.hpp"

namespace fixture {

struct Embedded {
  dyca::TimeSeries latent;
  dyca::TimeSeries observed;
  dyca::Matrix mixing;
};

/// Default Rössler run in 25 channels at 15 dB multiplicative noise.
inline const Embedded& rossler(std::uint64_t mixing_seed = 1) {
  static const dyca::TimeSeries latent = dyca::simulate_rossler({}, {});
  static std::map<std::uint64_t, Embedded> cache;
  auto it = cache.find(mixing_seed);
  if (it == cache.end()) {
    dyca::EmbeddingSpec spec;
    spec.mixing_seed = mixing_seed;
    it = cache.emplace(mixing_seed, Embedded{latent, dyca::embed(latent, spec, mixing_seed + 1),
                                             dyca::mixing_matrix(spec, 3)}).first;
  }
  return it->second;
}

/// ẋ1 = x2, ẋ2 = −x1 from (1, 0), 10 channels at 100 dB.
inline Embedded oscillator() {
  dyca::IntegrationSpec spec;
  spec.t_end = 200.0;
  spec.dt_sample = 0.05;
  spec.transient = 0.0;
  spec.initial_state = {1.0, 0.0, 0.0};
  const dyca::TimeSeries latent = dyca::simulate_linear_oscillator(1.0, spec);
  dyca::EmbeddingSpec embedding;
  embedding.target_dim = 10;
  embedding.snr_db = 100.0;
  embedding.mixing_seed = 4;
  return {latent, dyca::embed(latent, embedding, 5), dyca::mixing_matrix(embedding, 2)};
}

/// AR(1) process driven by white noise: a generic full-rank series with
/// nontrivial derivative correlations.
inline dyca::TimeSeries random_process(std::size_t channels, std::size_t samples, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  dyca::Matrix mix(channels, channels);
  for (double& x : mix.data()) x = normal(rng) / static_cast<double>(channels);
  dyca::Matrix data(channels, samples);
  dyca::Vector state(channels, 0.0), next(channels);
  for (std::size_t k = 0; k < samples; ++k) {
    for (std::size_t i = 0; i < channels; ++i) {
      double s = 0.7 * state[i];
      for (std::size_t j = 0; j < channels; ++j) s += 0.2 * mix(i, j) * state[j];
      next[i] = s + normal(rng);
    }
    state.swap(next);
    for (std::size_t i = 0; i < channels; ++i) data(i, k) = state[i];
  }
  return dyca::TimeSeries(std::move(data), 0.1);
}

}  // namespace fixture
