#include "dyca/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "dyca/error.hpp"

namespace dyca {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kPivotFloor = 1e-13;

void require_square(const Matrix& m, const char* op) {
  if (!m.is_square() || m.empty()) {
    throw Error(ErrorCode::kDimensionMismatch, std::string(op) + ": matrix must be square and non-empty");
  }
}

// Solves L·y = b in place (L lower triangular).
void forward_substitute(const Matrix& l, std::span<double> b) {
  const std::size_t n = l.rows();
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * b[k];
    b[i] = s / l(i, i);
  }
}

// Solves Lᵀ·x = b in place.
void backward_substitute_transposed(const Matrix& l, std::span<double> b) {
  const std::size_t n = l.rows();
  for (std::size_t ii = n; ii-- > 0;) {
    double s = b[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= l(k, ii) * b[k];
    b[ii] = s / l(ii, ii);
  }
}

void sign_normalize(std::span<double> v) {
  std::size_t arg = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > best) {
      best = std::abs(v[i]);
      arg = i;
    }
  }
  if (!v.empty() && v[arg] < 0.0) {
    for (double& x : v) x = -x;
  }
}

// Permutation sorting values descending; ties keep original order.
std::vector<std::size_t> descending_order(const Vector& values) {
  std::vector<std::size_t> idx(values.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  return idx;
}

Matrix add_ridge(const Matrix& m, double ridge) {
  Matrix out = m;
  if (ridge > 0.0) {
    const double shift = ridge * trace(m) / static_cast<double>(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) out(i, i) += shift;
  }
  return out;
}

}  // namespace

void normalize_column_signs(Matrix& m) {
  for (std::size_t j = 0; j < m.cols(); ++j) {
    Vector c = m.col(j);
    sign_normalize(c);
    m.set_col(j, c);
  }
}

Matrix cholesky(const Matrix& m) {
  require_square(m, "cholesky");
  const Matrix a = symmetrized(m);
  const std::size_t n = a.rows();
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, a(i, i));
  const double floor = kPivotFloor * max_diag;

  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > floor) || !(d > 0.0)) {
      throw Error(ErrorCode::kNotPositiveDefinite,
                  "cholesky: pivot " + std::to_string(j) + " is " + std::to_string(d));
    }
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  return l;
}

Matrix solve_spd(const Matrix& m, const Matrix& b) {
  require_square(m, "solve_spd");
  if (b.rows() != m.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "solve_spd: right-hand side has wrong row count");
  }
  const Matrix l = cholesky(m);
  Matrix x(b.rows(), b.cols());
  Vector col(b.rows());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    for (std::size_t i = 0; i < b.rows(); ++i) col[i] = b(i, j);
    forward_substitute(l, col);
    backward_substitute_transposed(l, col);
    x.set_col(j, col);
  }
  return x;
}

namespace {

template <typename Substitute>
Matrix triangular_solve(const Matrix& l, const Matrix& b, const char* op, Substitute substitute) {
  require_square(l, op);
  if (b.rows() != l.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, std::string(op) + ": right-hand side has wrong row count");
  }
  Matrix x(b.rows(), b.cols());
  Vector col(b.rows());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    for (std::size_t i = 0; i < b.rows(); ++i) col[i] = b(i, j);
    substitute(l, col);
    x.set_col(j, col);
  }
  return x;
}

}  // namespace

Matrix solve_lower(const Matrix& l, const Matrix& b) {
  return triangular_solve(l, b, "solve_lower", forward_substitute);
}

Matrix solve_lower_transposed(const Matrix& l, const Matrix& b) {
  return triangular_solve(l, b, "solve_lower_transposed", backward_substitute_transposed);
}

Vector solve_spd(const Matrix& m, std::span<const double> b) {
  require_square(m, "solve_spd");
  if (b.size() != m.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "solve_spd: right-hand side has wrong length");
  }
  const Matrix l = cholesky(m);
  Vector x(b.begin(), b.end());
  forward_substitute(l, x);
  backward_substitute_transposed(l, x);
  return x;
}

SymEigResult sym_eig(const Matrix& m) {
  require_square(m, "sym_eig");
  Matrix a = symmetrized(m);
  const std::size_t n = a.rows();
  Matrix v = Matrix::identity(n);
  const double fro = frobenius_norm(a);

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += a(i, j) * a(i, j);
    return std::sqrt(2.0 * s);
  };

  bool converged = false;
  for (int sweep = 0; sweep < kMaxJacobiSweeps; ++sweep) {
    const double off = off_norm();
    if (off == 0.0 || off <= 1e-2 * kEps * fro) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double app = a(p, p);
        const double aqq = a(q, q);
        // Entries negligible against both diagonals are dropped once the
        // first sweeps have done the bulk of the work.
        if (sweep > 3 && std::abs(app) + 100.0 * std::abs(apq) == std::abs(app) &&
            std::abs(aqq) + 100.0 * std::abs(apq) == std::abs(aqq)) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  if (!converged) {
    const double off = off_norm();
    if (!(off == 0.0 || off <= 1e-2 * kEps * fro)) {
      throw Error(ErrorCode::kNoConvergence, "sym_eig: Jacobi sweep cap reached");
    }
  }

  Vector diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = a(i, i);
  const auto order = descending_order(diag);
  SymEigResult result{Vector(n), Matrix(n, n)};
  for (std::size_t j = 0; j < n; ++j) {
    result.values[j] = diag[order[j]];
    result.vectors.set_col(j, v.col(order[j]));
  }
  normalize_column_signs(result.vectors);
  return result;
}

GenEigResult gen_sym_eig(const Matrix& a, const Matrix& b, double ridge) {
  require_square(a, "gen_sym_eig");
  require_square(b, "gen_sym_eig");
  if (a.rows() != b.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "gen_sym_eig: A and B differ in size");
  }
  if (!(ridge >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "gen_sym_eig: ridge must be non-negative");
  }
  const std::size_t n = a.rows();
  const Matrix l = cholesky(add_ridge(symmetrized(b), ridge));

  // C = L⁻¹ A L⁻ᵀ, built column by column: first W = L⁻¹ A, then C = L⁻¹ Wᵀ.
  const Matrix as = symmetrized(a);
  Matrix w(n, n);
  Vector col(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) col[i] = as(i, j);
    forward_substitute(l, col);
    w.set_col(j, col);
  }
  Matrix c(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) col[i] = w(j, i);
    forward_substitute(l, col);
    c.set_col(j, col);
  }
  const SymEigResult eig = sym_eig(c);

  GenEigResult result{eig.values, Matrix(n, n), ridge};
  for (std::size_t j = 0; j < n; ++j) {
    Vector y = eig.vectors.col(j);
    backward_substitute_transposed(l, y);
    sign_normalize(y);
    result.vectors.set_col(j, y);
  }
  return result;
}

SvdResult svd(const Matrix& m) {
  if (m.empty()) throw Error(ErrorCode::kEmptyInput, "svd: empty matrix");
  if (m.rows() < m.cols()) {
    SvdResult t = svd(m.transposed());
    return {std::move(t.v), std::move(t.s), std::move(t.u)};
  }
  const std::size_t rows = m.rows();
  const std::size_t n = m.cols();
  std::vector<Vector> u(n), v(n, Vector(n, 0.0));
  for (std::size_t j = 0; j < n; ++j) {
    u[j] = m.col(j);
    v[j][j] = 1.0;
  }

  bool converged = false;
  for (int sweep = 0; sweep < kMaxJacobiSweeps && !converged; ++sweep) {
    converged = true;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double alpha = dot(u[p], u[p]);
        const double beta = dot(u[q], u[q]);
        const double gamma = dot(u[p], u[q]);
        if (gamma == 0.0 || std::abs(gamma) <= kEps * std::sqrt(alpha * beta)) continue;
        converged = false;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t k = 0; k < rows; ++k) {
          const double up = u[p][k];
          const double uq = u[q][k];
          u[p][k] = c * up - s * uq;
          u[q][k] = s * up + c * uq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vp = v[p][k];
          const double vq = v[q][k];
          v[p][k] = c * vp - s * vq;
          v[q][k] = s * vp + c * vq;
        }
      }
    }
  }
  if (!converged) throw Error(ErrorCode::kNoConvergence, "svd: Jacobi sweep cap reached");

  Vector sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[j] = norm2(u[j]);
  const auto order = descending_order(sigma);
  SvdResult result{Matrix(rows, n), Vector(n), Matrix(n, n)};
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t src = order[j];
    result.s[j] = sigma[src];
    Vector uj = u[src];
    // Zero singular values leave a zero column in U.
    if (sigma[src] > 0.0) {
      for (double& x : uj) x /= sigma[src];
    }
    result.u.set_col(j, uj);
    result.v.set_col(j, v[src]);
  }
  return result;
}

BasisResult orthonormal_basis(const Matrix& columns, double rel_tol) {
  if (columns.empty()) throw Error(ErrorCode::kEmptyInput, "orthonormal_basis: no columns");
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "orthonormal_basis: rel_tol must lie in (0,1)");
  }
  const SvdResult d = svd(columns);
  std::size_t rank = 0;
  if (d.s.front() > 0.0) {
    const double cutoff = rel_tol * d.s.front();
    while (rank < d.s.size() && d.s[rank] >= cutoff) ++rank;
  }
  BasisResult result{d.u.columns(0, rank), rank};
  normalize_column_signs(result.basis);
  return result;
}

Vector principal_angles(const Matrix& u, const Matrix& v) {
  if (u.rows() != v.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "principal_angles: row counts differ");
  }
  // Angles are symmetric in the two subspaces; let `wide` have the most columns.
  const Matrix& wide = u.cols() >= v.cols() ? u : v;
  const Matrix& narrow = u.cols() >= v.cols() ? v : u;
  const std::size_t k = narrow.cols();
  if (k == 0) return {};

  const Matrix overlap = transpose_times(wide, narrow);  // p×q
  Vector cosines = svd(overlap).s;
  const Matrix residual = narrow - wide * overlap;       // component outside span(wide)
  Vector sines = svd(residual).s;
  std::sort(cosines.begin(), cosines.end(), std::greater<>());
  std::sort(sines.begin(), sines.end());

  Vector angles(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double s = std::clamp(sines[i], 0.0, 1.0);
    const double c = std::clamp(cosines[i], 0.0, 1.0);
    angles[i] = s * s < 0.5 ? std::asin(s) : std::acos(c);
  }
  std::sort(angles.begin(), angles.end());
  return angles;
}

Vector canonical_correlations(const Matrix& x, const Matrix& y) {
  if (x.cols() != y.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "canonical_correlations: sample counts differ");
  }
  auto centered_samples = [](const Matrix& m) {
    Matrix t = m.transposed();  // samples × channels
    for (std::size_t j = 0; j < t.cols(); ++j) {
      double mean = 0.0;
      for (std::size_t i = 0; i < t.rows(); ++i) mean += t(i, j);
      mean /= static_cast<double>(t.rows());
      for (std::size_t i = 0; i < t.rows(); ++i) t(i, j) -= mean;
    }
    return t;
  };
  const BasisResult bx = orthonormal_basis(centered_samples(x), 1e-10);
  const BasisResult by = orthonormal_basis(centered_samples(y), 1e-10);
  if (bx.rank == 0 || by.rank == 0) return {};
  Vector s = svd(transpose_times(bx.basis, by.basis)).s;
  for (double& c : s) c = std::clamp(c, 0.0, 1.0);
  s.resize(std::min(bx.rank, by.rank));
  return s;
}

}  // namespace dyca
