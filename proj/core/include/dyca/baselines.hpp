#pragma once

// Reference reductions: PCA on the mean-removed covariance and symmetric
// FastICA with a tanh contrast.

#include <cstddef>
#include <cstdint>

#include "dyca/matrix.hpp"
#include "dyca/signal.hpp"

namespace dyca {

struct PcaResult {
  Matrix components;  // N×k, orthonormal columns
  Vector variances;   // descending
  Vector mean;        // length N
};

struct IcaOptions {
  std::uint64_t seed = 0;
  int max_iter = 200;
  double tol = 1e-6;
};

struct IcaResult {
  Matrix unmixing;  // k×N, applied to mean-removed data
  TimeSeries sources;
  Vector mean;
  int iterations_used = 0;
  bool converged = false;
};

/// Covariance uses the 1/T normalization.
PcaResult pca(const TimeSeries& ts, std::size_t k);

/// componentsᵀ (x − mean), labels pca_1..pca_k.
TimeSeries pca_scores(const TimeSeries& ts, const PcaResult& result);

/// Requires at least 10·N samples.
IcaResult fastica(const TimeSeries& ts, std::size_t k, const IcaOptions& options = {});

}  // namespace dyca
