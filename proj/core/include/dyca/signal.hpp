#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dyca/matrix.hpp"

namespace dyca {

/// Multichannel, uniformly sampled signal: channels × samples.
class TimeSeries {
 public:
  /// Validates dt > 0, finite entries and one label per channel. Empty
  /// `labels` yields "ch_1".."ch_N".
  TimeSeries(Matrix data, double dt, std::vector<std::string> labels = {});

  std::size_t channels() const noexcept { return data_.rows(); }
  std::size_t samples() const noexcept { return data_.cols(); }
  double dt() const noexcept { return dt_; }
  const Matrix& data() const noexcept { return data_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  static std::vector<std::string> numbered_labels(const std::string& prefix, std::size_t count);

 private:
  Matrix data_;
  double dt_;
  std::vector<std::string> labels_;
};

/// Interior samples of q and their central-difference derivative, aligned
/// on the same time indices 1..T−2.
struct DerivativePair {
  Matrix q;
  Matrix qdot;
  double dt = 1.0;
};

/// Time-averaged second moments C0 = ⟨q qᵀ⟩, C1 = ⟨q̇ qᵀ⟩, C2 = ⟨q̇ q̇ᵀ⟩.
struct CorrelationTriple {
  /// c0 and c2 are symmetrized on construction.
  CorrelationTriple(Matrix c0, Matrix c1, Matrix c2, std::size_t sample_count);

  std::size_t dim() const noexcept { return c0.rows(); }

  Matrix c0;
  Matrix c1;
  Matrix c2;
  std::size_t sample_count;
};

struct WindowSpec {
  std::size_t length = 256;
  std::size_t hop = 256;
};

struct BandpassSpec {
  double low_hz = 0.5;
  double high_hz = 30.0;
  int order = 4;
};

/// One second-order section, a0 normalized to 1.
struct Biquad {
  double b0, b1, b2;
  double a1, a2;
};

DerivativePair central_difference(const TimeSeries& ts);

CorrelationTriple correlation_triple(const DerivativePair& pair);
/// central_difference followed by correlation_triple.
CorrelationTriple correlation_triple(const TimeSeries& ts);

/// Windows [i·hop, i·hop + length) that fit entirely, in order.
std::vector<TimeSeries> windows(const TimeSeries& ts, const WindowSpec& spec);

/// Per-channel mean removal.
TimeSeries remove_mean(const TimeSeries& ts);

/// Digital Butterworth bandpass as a cascade of `order` biquads (the
/// analog prototype of the given order becomes a 2·order bandpass),
/// bilinear transform with frequency pre-warping, unit gain at the
/// geometric center frequency.
std::vector<Biquad> design_butterworth_bandpass(const BandpassSpec& spec, double dt);

/// |H(e^{jω})| of a biquad cascade at frequency f (Hz).
double magnitude_response(const std::vector<Biquad>& sections, double freq_hz, double dt);

/// Zero-phase bandpass: each channel is padded by odd reflection of
/// length 3·order, run through the cascade forward-then-backward and
/// backward-then-forward (steady-state initial conditions), the two
/// results averaged and the padding stripped. Net phase is zero and the
/// operation commutes with time reversal.
TimeSeries bandpass_zero_phase(const TimeSeries& ts, const BandpassSpec& spec);

}  // namespace dyca
