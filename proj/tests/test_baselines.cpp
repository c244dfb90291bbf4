#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "dyca/baselines.hpp"
#include "dyca/error.hpp"
#include "dyca/linalg.hpp"
#include "support/oracles.hpp"

using namespace dyca;

namespace {

Matrix covariance(const Matrix& x) {
  Matrix c(x.rows(), x.rows());
  const auto n = static_cast<double>(x.cols());
  Vector mean(x.rows(), 0.0);
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t k = 0; k < x.cols(); ++k) mean[i] += x(i, k) / n;
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.rows(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < x.cols(); ++k) s += (x(i, k) - mean[i]) * (x(j, k) - mean[j]);
      c(i, j) = s / n;
    }
  return c;
}

double correlation(std::span<const double> a, std::span<const double> b) {
  const Matrix m = Matrix::from_columns({Vector(a.begin(), a.end()), Vector(b.begin(), b.end())}).transposed();
  const Matrix c = covariance(m);
  return c(0, 1) / std::sqrt(c(0, 0) * c(1, 1));
}

TimeSeries uniform_sources(std::size_t channels, std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-std::sqrt(3.0), std::sqrt(3.0));
  Matrix s(channels, samples);
  for (double& x : s.data()) x = u(rng);
  return TimeSeries(s, 1.0);
}

}  // namespace

TEST_CASE("pca finds the direction of a line") {
  Matrix x(2, 50);
  for (std::size_t k = 0; k < 50; ++k) x(0, k) = x(1, k) = static_cast<double>(k) - 10.0;
  const PcaResult r = pca(TimeSeries(x, 1.0), 1);
  CHECK(std::abs(r.components(0, 0)) == doctest::Approx(1.0 / std::numbers::sqrt2));
  CHECK(r.components(0, 0) == doctest::Approx(r.components(1, 0)));
  CHECK(r.mean[0] == doctest::Approx(14.5));
}

TEST_CASE("pca of an isotropic Gaussian") {
  std::mt19937_64 rng(1);
  const PcaResult r = pca(TimeSeries(oracle::random_matrix(2, 100000, rng), 1.0), 2);
  CHECK(std::abs(r.variances[0] / r.variances[1] - 1.0) <= 0.05);
}

TEST_CASE("pca invariants") {
  std::mt19937_64 rng(2);
  const Matrix mix = oracle::random_matrix(5, 5, rng);
  const TimeSeries ts(mix * oracle::random_matrix(5, 3000, rng), 1.0);
  const PcaResult full = pca(ts, 5);

  CHECK(max_abs(transpose_times(full.components, full.components) - Matrix::identity(5)) <= 1e-10);
  CHECK(std::is_sorted(full.variances.rbegin(), full.variances.rend()));
  for (double v : full.variances) CHECK(v >= 0.0);

  double total = 0.0, sum = 0.0;
  const Matrix c = covariance(ts.data());
  for (std::size_t i = 0; i < 5; ++i) {
    total += c(i, i);
    sum += full.variances[i];
  }
  CHECK(sum == doctest::Approx(total).epsilon(1e-8));

  // Lossless reconstruction with k = N.
  const TimeSeries scores = pca_scores(ts, full);
  Matrix rebuilt = full.components * scores.data();
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t k = 0; k < ts.samples(); ++k) rebuilt(i, k) += full.mean[i];
  CHECK(max_abs(rebuilt - ts.data()) <= 1e-10 * max_abs(ts.data()));

  // Score covariance is diagonal.
  const Matrix sc = covariance(scores.data());
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j)
      if (i != j) CHECK(std::abs(sc(i, j)) <= 1e-8 * sc(0, 0));
  CHECK(scores.labels()[0] == "pca_1");
}

TEST_CASE("pca is covariant under orthogonal sensor rotations") {
  std::mt19937_64 rng(3);
  const Matrix scale = Matrix::diagonal(Vector{5, 3, 2, 1});
  const TimeSeries ts(scale * oracle::random_matrix(4, 5000, rng), 1.0);
  const Matrix rot = orthonormal_basis(oracle::random_matrix(4, 4, rng)).basis;
  const PcaResult a = pca(ts, 3);
  const PcaResult b = pca(TimeSeries(rot * ts.data(), 1.0), 3);
  const Matrix expected = rot * a.components;
  for (std::size_t j = 0; j < 3; ++j) {
    const double sign = dot(b.components.col(j), expected.col(j)) < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(b.components(i, j) - sign * expected(i, j)) <= 1e-8);
  }
}

TEST_CASE("pca rejects a bad k") {
  for (std::size_t k : {std::size_t{0}, std::size_t{4}}) {
    try {
      pca(TimeSeries(Matrix(3, 10, 1.0), 1.0), k);
      FAIL("expected KTooLarge");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kKTooLarge);
    }
  }
}

TEST_CASE("fastica separates mixed uniform sources") {
  const TimeSeries s = uniform_sources(2, 10000, 5);
  const Matrix mix{{1.0, 0.6}, {0.4, 1.2}};
  const IcaResult r = fastica(TimeSeries(mix * s.data(), 1.0), 2, {.seed = 7});
  CHECK(r.converged);
  CHECK(r.sources.labels() == std::vector<std::string>{"ica_1", "ica_2"});
  for (std::size_t i = 0; i < 2; ++i) {
    double best = 0.0;
    for (std::size_t j = 0; j < 2; ++j) {
      best = std::max(best, std::abs(correlation(r.sources.data().row(i), s.data().row(j))));
    }
    CHECK(best >= 0.95);
  }
  const Matrix c = covariance(r.sources.data());
  CHECK(max_abs(c - Matrix::identity(2)) <= 0.05);
}

TEST_CASE("fastica on already independent inputs is a signed permutation") {
  const TimeSeries s = uniform_sources(3, 20000, 8);
  const IcaResult r = fastica(s, 3, {.seed = 1});
  REQUIRE(r.unmixing.rows() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    std::vector<double> row;
    for (std::size_t j = 0; j < 3; ++j) row.push_back(std::abs(r.unmixing(i, j)));
    std::sort(row.begin(), row.end());
    CHECK(row[2] == doctest::Approx(1.0).epsilon(0.05));
    CHECK(row[1] <= 0.05);
  }
}

TEST_CASE("fastica whitens a reduced set of sources") {
  std::mt19937_64 rng(9);
  const TimeSeries s = uniform_sources(3, 10000, 10);
  const Matrix mix = oracle::random_matrix(6, 3, rng);
  const IcaResult r = fastica(TimeSeries(mix * s.data(), 1.0), 3, {.seed = 2});
  CHECK(r.unmixing.cols() == 6);
  CHECK(max_abs(covariance(r.sources.data()) - Matrix::identity(3)) <= 0.05);
  CHECK(r.iterations_used <= 200);
}

TEST_CASE("fastica is deterministic per seed") {
  const TimeSeries s = uniform_sources(3, 5000, 11);
  const IcaResult a = fastica(s, 3, {.seed = 4});
  const IcaResult b = fastica(s, 3, {.seed = 4});
  CHECK(a.unmixing == b.unmixing);
  CHECK(a.sources.data() == b.sources.data());
}

TEST_CASE("fastica reports non-convergence instead of failing") {
  const TimeSeries s = uniform_sources(3, 5000, 12);
  const IcaResult r = fastica(s, 3, {.seed = 4, .max_iter = 1, .tol = 1e-15});
  CHECK_FALSE(r.converged);
  CHECK(r.iterations_used == 1);
}

TEST_CASE("fastica preconditions") {
  const TimeSeries s = uniform_sources(3, 20, 13);
  try {
    fastica(s, 2);
    FAIL("expected TooShort");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kTooShort);
  }
  try {
    fastica(uniform_sources(3, 100, 13), 4);
    FAIL("expected KTooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kKTooLarge);
  }
}
