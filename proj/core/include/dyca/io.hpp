#pragma once

// CSV and run-configuration formats.
//
// Time-series CSV: the first row holds channel labels, every further row
// is one sample; fields are comma-separated decimals, LF line endings.
// Labels containing a comma, quote or newline are quoted with "" escapes.
// Floats are written with 17 significant digits, so a write/read cycle
// reproduces every double exactly.
//
// Config: `key = value` lines, `#` starts a comment.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dyca/dyca.hpp"
#include "dyca/matrix.hpp"
#include "dyca/signal.hpp"

namespace dyca {

struct RunConfig {
  double sample_rate_hz = 256.0;
  double window_seconds = 1.0;
  /// Defaults to window_seconds (non-overlapping windows).
  std::optional<double> hop_seconds;
  double threshold = kDefaultThreshold;
  double ridge = 0.0;
  std::optional<BandpassSpec> bandpass;
  std::uint64_t mixing_seed = 1;
  std::uint64_t noise_seed = 2;
  bool remove_mean = false;

  /// Window and hop in samples, rounded to the nearest integer.
  WindowSpec window_spec() const;
};

/// A table whose columns carry labels; rows are records.
struct LabeledMatrix {
  Matrix values;
  std::vector<std::string> labels;
};

std::string format_double(double value);

TimeSeries read_timeseries_csv(const std::filesystem::path& path, double sample_rate_hz);
void write_timeseries_csv(const TimeSeries& ts, const std::filesystem::path& path);

/// Same grammar as the time-series CSV, without the sampling semantics.
/// Used for projection bases (one row per sensor, one column per basis
/// vector).
LabeledMatrix read_matrix_csv(const std::filesystem::path& path);
void write_matrix_csv(const Matrix& values, const std::vector<std::string>& labels,
                      const std::filesystem::path& path);

/// Header `window,t_start_s,lambda_1..lambda_k`; failed windows and
/// missing eigenvalues are written as `nan`.
void write_spectra_csv(const std::vector<WindowResult>& results, std::size_t top_k,
                       const std::filesystem::path& path);

/// Header `component,lambda`, one row per generalized eigenvalue.
void write_spectrum_csv(const DycaSpectrum& spectrum, const std::filesystem::path& path);

RunConfig parse_config(std::string_view text);
RunConfig read_config(const std::filesystem::path& path);

}  // namespace dyca
