#include "dyca/dyca.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "dyca/error.hpp"

namespace dyca {

namespace {

Matrix with_ridge(const Matrix& m, double ridge) {
  Matrix out = m;
  if (ridge > 0.0) {
    const double shift = ridge * trace(m) / static_cast<double>(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) out(i, i) += shift;
  }
  return out;
}

double quad_form(std::span<const double> x, const Matrix& m, std::span<const double> y) {
  return dot(x, m * y);
}

void require_dim(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw Error(ErrorCode::kDimensionMismatch, std::string(what) + ": expected length " +
                                                   std::to_string(want) + ", got " +
                                                   std::to_string(got));
  }
}

}  // namespace

DycaSpectrum fit(const CorrelationTriple& triple, const RidgePolicy& policy) {
  std::vector<double> ridges{policy.initial};
  for (double r : policy.escalation) {
    if (r > ridges.back()) ridges.push_back(r);
  }
  for (double ridge : ridges) {
    try {
      // With C0 = L·Lᵀ and C2 = R·Rᵀ the pencil reduces to K·Kᵀ w = λ w for
      // K = R⁻¹·C1·L⁻ᵀ, whose entries stay bounded by 1. Forming C1·C0⁻¹·C1ᵀ
      // first loses accuracy when the sensors are badly scaled.
      const Matrix l = cholesky(with_ridge(triple.c0, ridge));
      const Matrix r = cholesky(with_ridge(triple.c2, ridge));
      const Matrix k = solve_lower(l, solve_lower(r, triple.c1).transposed()).transposed();
      SymEigResult eig = sym_eig(symmetrized(k * k.transposed()));
      Matrix vectors = solve_lower_transposed(r, eig.vectors);
      normalize_column_signs(vectors);
      DycaSpectrum spectrum{std::move(eig.values), std::move(vectors), ridge, false};
      spectrum.exceeds_unity = spectrum.values.front() > 1.0 + kUnityOvershoot;
      return spectrum;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNotPositiveDefinite) throw;
    }
  }
  throw Error(ErrorCode::kSingular,
              "C0 or C2 is not positive definite even with relative ridge " +
                  std::to_string(ridges.back()));
}

Vector derive_v(std::span<const double> u, const CorrelationTriple& triple, double ridge) {
  require_dim(u.size(), triple.dim(), "derive_v");
  const Vector rhs = triple.c1.transposed() * u;
  try {
    return solve_spd(with_ridge(triple.c0, ridge), rhs);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kNotPositiveDefinite) {
      throw Error(ErrorCode::kSingular, "derive_v: C0 is not positive definite");
    }
    throw;
  }
}

DycaProjection build_projection(const DycaSpectrum& spectrum, const CorrelationTriple& triple,
                                double threshold, double subspace_tol) {
  if (!(subspace_tol > 0.0 && subspace_tol < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "build_projection: tolerance must lie in (0,1)");
  }
  const std::size_t dim = triple.dim();
  require_dim(spectrum.vectors.rows(), dim, "build_projection");
  std::size_t m = 0;
  while (m < spectrum.values.size() && spectrum.values[m] >= threshold) ++m;
  if (m == 0) {
    throw Error(ErrorCode::kNoComponents,
                "no generalized eigenvalue reaches threshold " + std::to_string(threshold));
  }

  DycaProjection proj;
  proj.m = m;
  proj.threshold = threshold;
  proj.u_part = spectrum.vectors.columns(0, m);
  proj.v_part = Matrix(dim, m);
  for (std::size_t i = 0; i < m; ++i) {
    proj.v_part.set_col(i, derive_v(proj.u_part.col(i), triple, spectrum.ridge_used));
  }

  // Work in the C0 inner product, where lengths measure signal energy.
  const Matrix c0 = with_ridge(triple.c0, spectrum.ridge_used);
  Matrix v_unit(dim, m);
  std::size_t nonzero = 0;
  for (std::size_t i = 0; i < m; ++i) {
    Vector v = proj.v_part.col(i);
    const double len = std::sqrt(std::max(quad_form(v, c0, v), 0.0));
    if (len == 0.0) continue;
    for (double& x : v) x /= len;
    v_unit.set_col(nonzero++, v);
  }
  v_unit = v_unit.columns(0, nonzero);

  Matrix kept = proj.u_part;
  if (nonzero > 0) {
    const Matrix c0u = c0 * proj.u_part;
    const Matrix gram_u = transpose_times(proj.u_part, c0u);
    const Matrix coeff = solve_spd(gram_u, transpose_times(c0u, v_unit));
    const Matrix residual = v_unit - proj.u_part * coeff;
    const SymEigResult res = sym_eig(transpose_times(residual, c0 * residual));
    for (std::size_t k = 0; k < res.values.size(); ++k) {
      if (std::sqrt(std::max(res.values[k], 0.0)) < subspace_tol) break;
      Matrix direction = residual * Matrix::from_columns({res.vectors.col(k)});
      kept = hcat(kept, direction);
    }
  }
  BasisResult basis = orthonormal_basis(kept, 1e-12);
  proj.basis = std::move(basis.basis);
  proj.n = basis.rank;
  return proj;
}

DycaAmplitudes project(const TimeSeries& ts, const Matrix& basis) {
  if (basis.rows() != ts.channels()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "basis has " + std::to_string(basis.rows()) + " rows but the series has " +
                    std::to_string(ts.channels()) + " channels");
  }
  return {TimeSeries(transpose_times(basis, ts.data()), ts.dt(),
                     TimeSeries::numbered_labels("dyca_", basis.cols())),
          std::nullopt};
}

DycaAmplitudes project(const TimeSeries& ts, const DycaProjection& projection) {
  return project(ts, projection.basis);
}

Vector optimal_coefficients(std::span<const double> u, const std::vector<Vector>& v_set,
                            const CorrelationTriple& triple) {
  const std::size_t dim = triple.dim();
  require_dim(u.size(), dim, "optimal_coefficients");
  const std::size_t k = v_set.size();
  if (k == 0) return {};
  for (const Vector& v : v_set) require_dim(v.size(), dim, "optimal_coefficients");

  Matrix gram(k, k);
  Vector rhs(k);
  const Vector c1t_u = triple.c1.transposed() * u;  // uᵀC1 as a column
  for (std::size_t r = 0; r < k; ++r) {
    const Vector c0v = triple.c0 * v_set[r];
    for (std::size_t j = 0; j < k; ++j) gram(j, r) = dot(v_set[j], c0v);
    rhs[r] = dot(c1t_u, v_set[r]);
  }
  try {
    return solve_spd(gram, rhs);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kNotPositiveDefinite) {
      throw Error(ErrorCode::kSingularGram, "v vectors are collinear in the C0 inner product");
    }
    throw;
  }
}

double evaluate_cost(const CostPoint& point, const CorrelationTriple& triple) {
  const std::size_t dim = triple.dim();
  require_dim(point.u.size(), dim, "evaluate_cost");
  require_dim(point.a.size(), point.v_set.size(), "evaluate_cost coefficients");
  for (const Vector& v : point.v_set) require_dim(v.size(), dim, "evaluate_cost");

  const double tau = quad_form(point.u, triple.c2, point.u);
  if (!(tau > 0.0)) throw Error(ErrorCode::kDegenerateU, "uᵀC2u must be positive");

  const Vector c1t_u = triple.c1.transposed() * point.u;
  double cross = 0.0;
  double quad = 0.0;
  const std::size_t k = point.v_set.size();
  for (std::size_t j = 0; j < k; ++j) {
    cross += point.a[j] * dot(c1t_u, point.v_set[j]);
    const Vector c0v = triple.c0 * point.v_set[j];
    for (std::size_t r = 0; r < k; ++r) {
      quad += point.a[j] * point.a[r] * dot(point.v_set[r], c0v);
    }
  }
  return 1.0 - 2.0 * cross / tau + quad / tau;
}

std::vector<WindowResult> dyca_windows(const TimeSeries& ts, const WindowSpec& spec,
                                       const FitOptions& options) {
  const std::vector<TimeSeries> parts = windows(ts, spec);
  std::vector<WindowResult> results(parts.size());

  auto run_one = [&](std::size_t i) {
    WindowResult& r = results[i];
    r.index = i;
    r.t_start = static_cast<double>(i * spec.hop) * ts.dt();
    try {
      const TimeSeries& w = parts[i];
      const CorrelationTriple triple =
          correlation_triple(options.remove_mean ? remove_mean(w) : w);
      r.spectrum = fit(triple, options.ridge);
    } catch (const Error& e) {
      r.error = e.what();
    }
  };

  unsigned workers = options.threads == 0 ? std::thread::hardware_concurrency() : options.threads;
  workers = std::clamp<unsigned>(workers, 1u, static_cast<unsigned>(std::max<std::size_t>(parts.size(), 1)));
  if (workers == 1) {
    for (std::size_t i = 0; i < parts.size(); ++i) run_one(i);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < parts.size(); i = next++) run_one(i);
    });
  }
  pool.clear();  // joins
  return results;
}

}  // namespace dyca
