#include "dyca/signal.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "dyca/error.hpp"

namespace dyca {

namespace {

using Complex = std::complex<double>;

struct SectionState {
  double z1 = 0.0;
  double z2 = 0.0;
};

// Direct form II transposed; the states start at the steady state of a
// constant input equal to signal.front().
void run_cascade(const std::vector<Biquad>& sections, std::vector<double>& signal) {
  if (signal.empty()) return;
  std::vector<SectionState> states(sections.size());
  double level = signal.front();
  for (std::size_t s = 0; s < sections.size(); ++s) {
    const Biquad& b = sections[s];
    const double dc_gain = (b.b0 + b.b1 + b.b2) / (1.0 + b.a1 + b.a2);
    const double out = dc_gain * level;
    states[s].z2 = b.b2 * level - b.a2 * out;
    states[s].z1 = out - b.b0 * level;
    level = out;
  }
  for (double& x : signal) {
    double v = x;
    for (std::size_t s = 0; s < sections.size(); ++s) {
      const Biquad& b = sections[s];
      SectionState& st = states[s];
      const double y = b.b0 * v + st.z1;
      st.z1 = b.b1 * v - b.a1 * y + st.z2;
      st.z2 = b.b2 * v - b.a2 * y;
      v = y;
    }
    x = v;
  }
}

void reverse(std::vector<double>& v) { std::reverse(v.begin(), v.end()); }

Complex section_response(const Biquad& b, Complex zinv) {
  const Complex num = b.b0 + zinv * (b.b1 + zinv * b.b2);
  const Complex den = 1.0 + zinv * (b.a1 + zinv * b.a2);
  return num / den;
}

Complex cascade_response(const std::vector<Biquad>& sections, double omega) {
  const Complex zinv = std::polar(1.0, -omega);
  Complex h{1.0, 0.0};
  for (const Biquad& b : sections) h *= section_response(b, zinv);
  return h;
}

}  // namespace

TimeSeries::TimeSeries(Matrix data, double dt, std::vector<std::string> labels)
    : data_(std::move(data)), dt_(dt), labels_(std::move(labels)) {
  if (data_.empty()) throw Error(ErrorCode::kEmptyInput, "time series has no channels or samples");
  if (!(std::isfinite(dt_) && dt_ > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "time series dt must be finite and positive");
  }
  if (!all_finite(data_)) throw Error(ErrorCode::kNonFinite, "time series contains non-finite values");
  if (labels_.empty()) labels_ = numbered_labels("ch_", data_.rows());
  if (labels_.size() != data_.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "time series needs one label per channel");
  }
}

std::vector<std::string> TimeSeries::numbered_labels(const std::string& prefix, std::size_t count) {
  std::vector<std::string> out;
  out.reserve(count);
  for (std::size_t i = 1; i <= count; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

CorrelationTriple::CorrelationTriple(Matrix c0_in, Matrix c1_in, Matrix c2_in, std::size_t count)
    : c0(std::move(c0_in)), c1(std::move(c1_in)), c2(std::move(c2_in)), sample_count(count) {
  const std::size_t n = c0.rows();
  for (const Matrix* m : {&c0, &c1, &c2}) {
    if (m->rows() != n || m->cols() != n || n == 0) {
      throw Error(ErrorCode::kDimensionMismatch, "correlation triple needs three equal square matrices");
    }
  }
  c0 = symmetrized(c0);
  c2 = symmetrized(c2);
}

DerivativePair central_difference(const TimeSeries& ts) {
  const std::size_t n = ts.channels();
  const std::size_t t = ts.samples();
  if (t < 3) throw Error(ErrorCode::kTooShort, "central difference needs at least 3 samples");
  const std::size_t k = t - 2;
  DerivativePair pair{Matrix(n, k), Matrix(n, k), ts.dt()};
  const double inv = 1.0 / (2.0 * ts.dt());
  const Matrix& d = ts.data();
  for (std::size_t c = 0; c < n; ++c) {
    auto src = d.row(c);
    auto q = pair.q.row(c);
    auto qd = pair.qdot.row(c);
    for (std::size_t i = 0; i < k; ++i) {
      q[i] = src[i + 1];
      qd[i] = (src[i + 2] - src[i]) * inv;
    }
  }
  return pair;
}

CorrelationTriple correlation_triple(const DerivativePair& pair) {
  const std::size_t k = pair.q.cols();
  if (k == 0 || pair.q.rows() == 0) throw Error(ErrorCode::kEmptyInput, "empty derivative pair");
  if (pair.qdot.rows() != pair.q.rows() || pair.qdot.cols() != k) {
    throw Error(ErrorCode::kDimensionMismatch, "q and qdot differ in shape");
  }
  const double scale = 1.0 / static_cast<double>(k);
  return CorrelationTriple(scale * times_transpose(pair.q, pair.q),
                           scale * times_transpose(pair.qdot, pair.q),
                           scale * times_transpose(pair.qdot, pair.qdot), k);
}

CorrelationTriple correlation_triple(const TimeSeries& ts) {
  return correlation_triple(central_difference(ts));
}

std::vector<TimeSeries> windows(const TimeSeries& ts, const WindowSpec& spec) {
  if (spec.length < 3) throw Error(ErrorCode::kTooShort, "window length must be at least 3 samples");
  if (spec.hop < 1) throw Error(ErrorCode::kInvalidArgument, "window hop must be at least 1 sample");
  if (spec.length > ts.samples()) {
    throw Error(ErrorCode::kWindowTooLong, "window length " + std::to_string(spec.length) +
                                               " exceeds series length " +
                                               std::to_string(ts.samples()));
  }
  std::vector<TimeSeries> out;
  for (std::size_t start = 0; start + spec.length <= ts.samples(); start += spec.hop) {
    out.emplace_back(ts.data().columns(start, spec.length), ts.dt(), ts.labels());
  }
  return out;
}

TimeSeries remove_mean(const TimeSeries& ts) {
  Matrix d = ts.data();
  for (std::size_t c = 0; c < d.rows(); ++c) {
    auto row = d.row(c);
    double mean = 0.0;
    for (double x : row) mean += x;
    mean /= static_cast<double>(row.size());
    for (double& x : row) x -= mean;
  }
  return TimeSeries(std::move(d), ts.dt(), ts.labels());
}

std::vector<Biquad> design_butterworth_bandpass(const BandpassSpec& spec, double dt) {
  const double nyquist = 0.5 / dt;
  if (!(spec.low_hz > 0.0 && spec.high_hz > spec.low_hz)) {
    throw Error(ErrorCode::kInvalidBand, "bandpass needs 0 < low < high");
  }
  if (!(spec.high_hz < nyquist)) {
    throw Error(ErrorCode::kInvalidBand, "bandpass upper edge must lie below Nyquist (" +
                                             std::to_string(nyquist) + " Hz)");
  }
  if (spec.order < 2 || spec.order % 2 != 0) {
    throw Error(ErrorCode::kInvalidBand, "bandpass order must be even and at least 2");
  }
  const double pi = std::numbers::pi;
  const double fs2 = 2.0 / dt;
  const double w_low = fs2 * std::tan(pi * spec.low_hz * dt);
  const double w_high = fs2 * std::tan(pi * spec.high_hz * dt);
  const double w0 = std::sqrt(w_low * w_high);
  const double bw = w_high - w_low;
  const int n = spec.order;

  std::vector<Biquad> sections;
  sections.reserve(static_cast<std::size_t>(n));
  // Upper-half-plane prototype poles; conjugates supply the other halves
  // of each biquad.
  for (int k = 1; k <= n / 2; ++k) {
    const Complex p = std::polar(1.0, pi * (2.0 * k + n - 1) / (2.0 * n));
    const Complex pb = p * bw;
    const Complex disc = std::sqrt(pb * pb - 4.0 * w0 * w0);
    for (const Complex s : {(pb + disc) / 2.0, (pb - disc) / 2.0}) {
      const Complex z = (fs2 + s) / (fs2 - s);
      sections.push_back({1.0, 0.0, -1.0, -2.0 * z.real(), std::norm(z)});
    }
  }
  const double center = 2.0 * std::atan(w0 / fs2);
  const double gain = 1.0 / std::abs(cascade_response(sections, center));
  const double per_section = std::pow(gain, 1.0 / static_cast<double>(sections.size()));
  for (Biquad& b : sections) {
    b.b0 *= per_section;
    b.b1 *= per_section;
    b.b2 *= per_section;
  }
  return sections;
}

double magnitude_response(const std::vector<Biquad>& sections, double freq_hz, double dt) {
  return std::abs(cascade_response(sections, 2.0 * std::numbers::pi * freq_hz * dt));
}

TimeSeries bandpass_zero_phase(const TimeSeries& ts, const BandpassSpec& spec) {
  const auto sections = design_butterworth_bandpass(spec, ts.dt());
  const std::size_t t = ts.samples();
  const std::size_t pad = 3 * static_cast<std::size_t>(spec.order);
  if (t <= pad) {
    throw Error(ErrorCode::kTooShort, "bandpass needs more than " + std::to_string(pad) + " samples");
  }
  Matrix out(ts.channels(), t);
  std::vector<double> padded(t + 2 * pad);
  for (std::size_t c = 0; c < ts.channels(); ++c) {
    auto x = ts.data().row(c);
    for (std::size_t i = 0; i < pad; ++i) {
      padded[i] = 2.0 * x[0] - x[pad - i];
      padded[pad + t + i] = 2.0 * x[t - 1] - x[t - 2 - i];
    }
    std::copy(x.begin(), x.end(), padded.begin() + static_cast<std::ptrdiff_t>(pad));

    std::vector<double> fb = padded;
    run_cascade(sections, fb);
    reverse(fb);
    run_cascade(sections, fb);
    reverse(fb);

    std::vector<double> bf = padded;
    reverse(bf);
    run_cascade(sections, bf);
    reverse(bf);
    run_cascade(sections, bf);

    auto y = out.row(c);
    for (std::size_t i = 0; i < t; ++i) y[i] = 0.5 * (fb[pad + i] + bf[pad + i]);
  }
  return TimeSeries(std::move(out), ts.dt(), ts.labels());
}

}  // namespace dyca
