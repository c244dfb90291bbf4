#include "dyca/dynsys.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "dyca/error.hpp"
#include "dyca/linalg.hpp"

namespace dyca {

namespace {

// Dormand–Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
// Fifth-order solution minus embedded fourth-order solution.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// Continuous extension (Hairer, Nørsett & Wanner).
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

constexpr long kMaxSteps = 50'000'000;

void validate(const IntegrationSpec& spec) {
  auto bad = [](const std::string& what) { throw Error(ErrorCode::kInvalidArgument, what); };
  if (!(spec.dt_sample > 0.0)) bad("dt_sample must be positive");
  if (!(spec.transient >= 0.0)) bad("transient must be non-negative");
  if (!(spec.t_end > spec.t_start + spec.transient)) bad("t_end must exceed t_start + transient");
  if (!(spec.abs_tol > 0.0 && spec.rel_tol > 0.0)) bad("tolerances must be positive");
}

}  // namespace

std::array<double, 3> rossler_rhs(const RosslerParams& p, std::span<const double, 3> x) {
  return {-x[1] - x[2], x[0] + p.a * x[1], p.b - p.c * x[2] + x[0] * x[1]};
}

Matrix integrate_dopri5(const OdeRhs& rhs, std::span<const double> y0, double t0,
                        std::span<const double> times, double abs_tol, double rel_tol) {
  const std::size_t n = y0.size();
  Matrix out(n, times.size());
  if (times.empty()) return out;
  if (!std::is_sorted(times.begin(), times.end()) || times.front() < t0) {
    throw Error(ErrorCode::kInvalidArgument, "sample times must be ascending and not before t0");
  }

  Vector y(y0.begin(), y0.end()), y_new(n), tmp(n), err(n);
  std::vector<Vector> k(7, Vector(n));
  double t = t0;
  rhs(t, y, k[0]);

  std::size_t next = 0;
  while (next < times.size() && times[next] == t0) {
    out.set_col(next++, y);
  }

  auto scaled_norm = [&](std::span<const double> v, std::span<const double> ref) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sc = abs_tol + rel_tol * std::abs(ref[i]);
      s += (v[i] / sc) * (v[i] / sc);
    }
    return std::sqrt(s / static_cast<double>(n));
  };

  const double t_final = times.back();
  double h;
  {
    const double d0 = scaled_norm(y, y);
    const double d1n = scaled_norm(k[0], y);
    h = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
    h = std::min(h, t_final - t0);
  }

  long steps = 0;
  while (next < times.size()) {
    if (++steps > kMaxSteps) throw Error(ErrorCode::kStepFailure, "step budget exhausted");
    if (h < 1e-14 * std::max(1.0, std::abs(t))) {
      throw Error(ErrorCode::kStepFailure, "step size underflow at t = " + std::to_string(t));
    }
    const bool last = h >= t_final - t;
    if (last) h = t_final - t;

    auto stage = [&](Vector& dst, std::initializer_list<std::pair<int, double>> terms) {
      for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (auto [j, a] : terms) s += a * k[j][i];
        dst[i] = y[i] + h * s;
      }
    };
    stage(tmp, {{0, a21}});
    rhs(t + c2 * h, tmp, k[1]);
    stage(tmp, {{0, a31}, {1, a32}});
    rhs(t + c3 * h, tmp, k[2]);
    stage(tmp, {{0, a41}, {1, a42}, {2, a43}});
    rhs(t + c4 * h, tmp, k[3]);
    stage(tmp, {{0, a51}, {1, a52}, {2, a53}, {3, a54}});
    rhs(t + c5 * h, tmp, k[4]);
    stage(tmp, {{0, a61}, {1, a62}, {2, a63}, {3, a64}, {4, a65}});
    rhs(t + h, tmp, k[5]);
    stage(y_new, {{0, a71}, {2, a73}, {3, a74}, {4, a75}, {5, a76}});
    rhs(t + h, y_new, k[6]);

    double err_norm = 0.0;
    bool finite = true;
    for (std::size_t i = 0; i < n; ++i) {
      err[i] = h * (e1 * k[0][i] + e3 * k[2][i] + e4 * k[3][i] + e5 * k[4][i] + e6 * k[5][i] +
                    e7 * k[6][i]);
      const double sc = abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      err_norm += (err[i] / sc) * (err[i] / sc);
      finite = finite && std::isfinite(y_new[i]);
    }
    err_norm = std::sqrt(err_norm / static_cast<double>(n));
    if (!finite || !std::isfinite(err_norm)) {
      h *= 0.2;
      continue;
    }
    if (err_norm > 1.0) {
      h *= std::max(0.2, 0.9 * std::pow(err_norm, -0.2));
      continue;
    }

    // Accepted: emit samples in (t, t + h] from the continuous extension.
    const double t_new = last ? t_final : t + h;
    while (next < times.size() && times[next] <= t_new) {
      const double theta = (times[next] - t) / h;
      const double theta1 = 1.0 - theta;
      for (std::size_t i = 0; i < n; ++i) {
        const double r1 = y[i];
        const double r2 = y_new[i] - y[i];
        const double r3 = h * k[0][i] - r2;
        const double r4 = r2 - h * k[6][i] - r3;
        const double r5 = h * (d1 * k[0][i] + d3 * k[2][i] + d4 * k[3][i] + d5 * k[4][i] +
                               d6 * k[5][i] + d7 * k[6][i]);
        tmp[i] = r1 + theta * (r2 + theta1 * (r3 + theta * (r4 + theta1 * r5)));
      }
      out.set_col(next++, tmp);
    }
    t = t_new;
    y.swap(y_new);
    k[0].swap(k[6]);
    const double grow = err_norm == 0.0 ? 5.0 : std::min(5.0, 0.9 * std::pow(err_norm, -0.2));
    h *= std::max(0.2, grow);
  }
  return out;
}

Vector sample_times(const IntegrationSpec& spec) {
  validate(spec);
  const double first = spec.t_start + spec.transient;
  const auto count =
      static_cast<std::size_t>(std::floor((spec.t_end - first) / spec.dt_sample + 1e-9)) + 1;
  Vector times(count);
  for (std::size_t i = 0; i < count; ++i) times[i] = first + static_cast<double>(i) * spec.dt_sample;
  return times;
}

TimeSeries simulate_rossler(const RosslerParams& params, const IntegrationSpec& spec) {
  const Vector times = sample_times(spec);
  const OdeRhs rhs = [&params](double, std::span<const double> y, std::span<double> dydt) {
    const auto d = rossler_rhs(params, std::span<const double, 3>(y.data(), 3));
    std::copy(d.begin(), d.end(), dydt.begin());
  };
  Matrix x = integrate_dopri5(rhs, spec.initial_state, spec.t_start, times, spec.abs_tol,
                              spec.rel_tol);
  return TimeSeries(std::move(x), spec.dt_sample, {"x1", "x2", "x3"});
}

TimeSeries simulate_linear_oscillator(double omega, const IntegrationSpec& spec) {
  if (!(omega > 0.0)) throw Error(ErrorCode::kInvalidArgument, "omega must be positive");
  const Vector times = sample_times(spec);
  const double x10 = spec.initial_state[0];
  const double x20 = spec.initial_state[1];
  Matrix x(2, times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double tau = times[i] - spec.t_start;
    const double c = std::cos(omega * tau);
    const double s = std::sin(omega * tau);
    x(0, i) = x10 * c + (x20 / omega) * s;
    x(1, i) = -x10 * omega * s + x20 * c;
  }
  return TimeSeries(std::move(x), spec.dt_sample, {"x1", "x2"});
}

Matrix mixing_matrix(const EmbeddingSpec& spec, std::size_t latent_dim) {
  if (spec.target_dim < latent_dim || latent_dim == 0) {
    throw Error(ErrorCode::kDimensionMismatch,
                "target dimension " + std::to_string(spec.target_dim) +
                    " is smaller than the latent dimension " + std::to_string(latent_dim));
  }
  Matrix w(spec.target_dim, latent_dim);
  if (spec.identity_mixing) {
    for (std::size_t i = 0; i < latent_dim; ++i) w(i, i) = 1.0;
    return w;
  }
  std::mt19937_64 rng(spec.mixing_seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  do {
    for (double& x : w.data()) x = normal(rng);
  } while (orthonormal_basis(w, 1e-10).rank < latent_dim);
  return w;
}

double relative_noise_level(const EmbeddingSpec& spec) {
  if (std::isnan(spec.snr_db)) throw Error(ErrorCode::kBadValue, "snr_db is NaN");
  if (std::isinf(spec.snr_db)) {
    if (spec.snr_db < 0) throw Error(ErrorCode::kBadValue, "snr_db = -inf");
    return 0.0;
  }
  const double divisor = spec.scale == SnrScale::kTenLog ? 10.0 : 20.0;
  return std::pow(10.0, -spec.snr_db / divisor);
}

TimeSeries embed(const TimeSeries& latent, const EmbeddingSpec& spec, std::uint64_t noise_seed) {
  const Matrix w = mixing_matrix(spec, latent.channels());
  Matrix out = w * latent.data();
  const double sigma = relative_noise_level(spec);
  if (sigma > 0.0) {
    std::mt19937_64 rng(noise_seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t c = 0; c < out.rows(); ++c) {
      auto row = out.row(c);
      if (spec.noise == NoiseKind::kMultiplicative) {
        for (double& x : row) x *= 1.0 + sigma * normal(rng);
      } else {
        const double rms = norm2(row) / std::sqrt(static_cast<double>(row.size()));
        for (double& x : row) x += rms * sigma * normal(rng);
      }
    }
  }
  return TimeSeries(std::move(out), latent.dt(), TimeSeries::numbered_labels("s_", spec.target_dim));
}

}  // namespace dyca
