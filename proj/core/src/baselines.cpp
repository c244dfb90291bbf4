#include "dyca/baselines.hpp"

#include <cmath>
#include <random>

#include "dyca/error.hpp"
#include "dyca/linalg.hpp"

namespace dyca {

namespace {

void check_k(std::size_t k, std::size_t channels) {
  if (k < 1 || k > channels) {
    throw Error(ErrorCode::kKTooLarge, "k = " + std::to_string(k) + " must lie in [1, " +
                                           std::to_string(channels) + "]");
  }
}

Vector channel_means(const Matrix& data) {
  Vector mean(data.rows(), 0.0);
  for (std::size_t c = 0; c < data.rows(); ++c) {
    for (double x : data.row(c)) mean[c] += x;
    mean[c] /= static_cast<double>(data.cols());
  }
  return mean;
}

Matrix centered(const Matrix& data, const Vector& mean) {
  Matrix out = data;
  for (std::size_t c = 0; c < out.rows(); ++c)
    for (double& x : out.row(c)) x -= mean[c];
  return out;
}

// (W Wᵀ)^{-1/2} W
Matrix symmetric_decorrelation(const Matrix& w) {
  const SymEigResult eig = sym_eig(times_transpose(w, w));
  const std::size_t k = w.rows();
  Matrix scaled(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      scaled(i, j) = eig.vectors(i, j) / std::sqrt(std::max(eig.values[j], 1e-300));
  return times_transpose(scaled, eig.vectors) * w;
}

}  // namespace

PcaResult pca(const TimeSeries& ts, std::size_t k) {
  check_k(k, ts.channels());
  PcaResult result;
  result.mean = channel_means(ts.data());
  const Matrix x = centered(ts.data(), result.mean);
  const Matrix cov = (1.0 / static_cast<double>(ts.samples())) * times_transpose(x, x);
  const SymEigResult eig = sym_eig(cov);
  result.components = eig.vectors.columns(0, k);
  result.variances.assign(eig.values.begin(), eig.values.begin() + static_cast<std::ptrdiff_t>(k));
  for (double& v : result.variances) v = std::max(v, 0.0);
  return result;
}

TimeSeries pca_scores(const TimeSeries& ts, const PcaResult& result) {
  if (result.components.rows() != ts.channels()) {
    throw Error(ErrorCode::kDimensionMismatch, "PCA components do not match channel count");
  }
  return TimeSeries(transpose_times(result.components, centered(ts.data(), result.mean)), ts.dt(),
                    TimeSeries::numbered_labels("pca_", result.components.cols()));
}

IcaResult fastica(const TimeSeries& ts, std::size_t k, const IcaOptions& options) {
  check_k(k, ts.channels());
  if (ts.samples() < 10 * ts.channels()) {
    throw Error(ErrorCode::kTooShort, "FastICA needs at least 10 samples per channel");
  }
  const PcaResult white = pca(ts, k);
  for (double v : white.variances) {
    if (!(v > 0.0)) throw Error(ErrorCode::kSingular, "FastICA: zero-variance principal direction");
  }
  // Whitening matrix k×N: D^{-1/2} Eᵀ.
  Matrix whitening = white.components.transposed();
  for (std::size_t i = 0; i < k; ++i)
    for (double& x : whitening.row(i)) x /= std::sqrt(white.variances[i]);
  const Matrix z = whitening * centered(ts.data(), white.mean);  // k×T
  const std::size_t t = z.cols();
  const double inv_t = 1.0 / static_cast<double>(t);

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix w(k, k);
  for (double& x : w.data()) x = normal(rng);
  w = symmetric_decorrelation(w);

  IcaResult result{Matrix(), TimeSeries(Matrix(1, 1), 1.0), white.mean, 0, false};
  Matrix g(k, t);
  for (int iter = 1; iter <= options.max_iter; ++iter) {
    const Matrix y = w * z;
    Vector mean_dg(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
      auto yi = y.row(i);
      auto gi = g.row(i);
      for (std::size_t s = 0; s < t; ++s) {
        const double th = std::tanh(yi[s]);
        gi[s] = th;
        mean_dg[i] += 1.0 - th * th;
      }
      mean_dg[i] *= inv_t;
    }
    Matrix w_next = inv_t * times_transpose(g, z);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) w_next(i, j) -= mean_dg[i] * w(i, j);
    w_next = symmetric_decorrelation(w_next);

    double change = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      change = std::max(change, std::abs(std::abs(dot(w_next.row(i), w.row(i))) - 1.0));
    }
    w = std::move(w_next);
    result.iterations_used = iter;
    if (change < options.tol) {
      result.converged = true;
      break;
    }
  }
  result.unmixing = w * whitening;
  result.sources = TimeSeries(w * z, ts.dt(), TimeSeries::numbered_labels("ica_", k));
  return result;
}

}  // namespace dyca
