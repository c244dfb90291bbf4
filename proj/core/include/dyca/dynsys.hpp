#pragma once

// Synthetic ground truth: the Rössler system, an exact linear oscillator,
// and the noisy high-dimensional sensor embedding q(t) = W x(t) + noise.

#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>

#include "dyca/matrix.hpp"
#include "dyca/signal.hpp"

namespace dyca {

struct RosslerParams {
  double a = 0.15;
  double b = 0.2;
  double c = 10.0;
};

struct IntegrationSpec {
  double t_start = 0.0;
  double t_end = 2100.0;
  double dt_sample = 0.2;
  double transient = 100.0;
  double abs_tol = 1e-9;
  double rel_tol = 1e-6;
  std::array<double, 3> initial_state{1.0, 1.0, 1.0};
};

enum class NoiseKind { kMultiplicative, kAdditive };

/// How snr_db maps to the relative noise level σ/A.
///   kTenLog:    σ/A = 10^(−snr_db/10)
///   kTwentyLog: σ/A = 10^(−snr_db/20)
enum class SnrScale { kTenLog, kTwentyLog };

struct EmbeddingSpec {
  std::size_t target_dim = 25;
  std::uint64_t mixing_seed = 1;
  double snr_db = 15.0;  // +inf for a noiseless embedding
  NoiseKind noise = NoiseKind::kMultiplicative;
  SnrScale scale = SnrScale::kTenLog;
  /// Replace W by the N×n identity block.
  bool identity_mixing = false;
};

using OdeRhs = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

std::array<double, 3> rossler_rhs(const RosslerParams& p, std::span<const double, 3> x);

/// Adaptive Dormand–Prince 5(4) integration from t0, sampled through the
/// continuous extension at the requested (ascending) times.
/// Result: dim × times.size().
Matrix integrate_dopri5(const OdeRhs& rhs, std::span<const double> y0, double t0,
                        std::span<const double> times, double abs_tol, double rel_tol);

/// Uniform grid t_start + transient, + dt_sample, ... ≤ t_end.
Vector sample_times(const IntegrationSpec& spec);

/// Channels x1, x2, x3 on sample_times(spec).
TimeSeries simulate_rossler(const RosslerParams& params, const IntegrationSpec& spec);

/// Closed form of ẋ1 = x2, ẋ2 = −ω² x1 from initial_state[0..1] on
/// sample_times(spec).
TimeSeries simulate_linear_oscillator(double omega, const IntegrationSpec& spec);

/// N×n mixing matrix with i.i.d. standard normal entries, redrawn until
/// it has full column rank.
Matrix mixing_matrix(const EmbeddingSpec& spec, std::size_t latent_dim);

/// σ/A for the spec's snr_db and scale; 0 for an infinite SNR.
double relative_noise_level(const EmbeddingSpec& spec);

/// W·x plus per-sample per-channel Gaussian noise. Multiplicative:
/// clean·(1 + η), η ~ N(0, σ_rel²). Additive: clean + ε with
/// ε ~ N(0, (RMS_channel·σ_rel)²). Labels s_1..s_N.
TimeSeries embed(const TimeSeries& latent, const EmbeddingSpec& spec, std::uint64_t noise_seed);

}  // namespace dyca
