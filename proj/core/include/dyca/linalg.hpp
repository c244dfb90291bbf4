#pragma once

// Dense symmetric linear algebra used by the DyCA fit: Cholesky
// factorization and SPD solves, a cyclic Jacobi symmetric eigensolver,
// the symmetric-definite generalized eigenproblem via Cholesky reduction,
// one-sided Jacobi SVD, and subspace comparison.
//
// Every symmetric routine symmetrizes its input as (M + Mᵀ)/2 first.
// Eigenvectors and basis columns follow one sign convention: the entry of
// largest magnitude is positive.

#include <cstddef>
#include <span>

#include "dyca/matrix.hpp"

namespace dyca {

struct SymEigResult {
  Vector values;   // descending
  Matrix vectors;  // unit-norm columns, same order as values
};

struct GenEigResult {
  Vector values;   // descending
  Matrix vectors;  // columns u_i with u_iᵀ B u_i = 1
  double ridge_used = 0.0;
};

struct SvdResult {
  Matrix u;        // m×k, orthonormal columns (k = min(m, n))
  Vector s;        // descending, length k
  Matrix v;        // n×k, orthonormal columns
};

struct BasisResult {
  Matrix basis;
  std::size_t rank = 0;
};

inline constexpr double kDefaultRankTolerance = 1e-8;
inline constexpr int kMaxJacobiSweeps = 100;

/// Lower-triangular L with L·Lᵀ = M. Throws kNotPositiveDefinite on a
/// pivot ≤ 1e-13·max(diag M), which also catches numerically singular input.
Matrix cholesky(const Matrix& m);

/// X with M·X = B for SPD M, by Cholesky factorization and two
/// triangular solves.
Matrix solve_spd(const Matrix& m, const Matrix& b);
Vector solve_spd(const Matrix& m, std::span<const double> b);

/// L⁻¹·B and L⁻ᵀ·B for lower-triangular L with nonzero diagonal.
Matrix solve_lower(const Matrix& l, const Matrix& b);
Matrix solve_lower_transposed(const Matrix& l, const Matrix& b);

/// Full spectrum of a symmetric matrix by cyclic Jacobi rotations.
SymEigResult sym_eig(const Matrix& m);

/// A u = λ B u for symmetric A and SPD B. With ridge > 0 the pencil uses
/// B + ridge·(trace(B)/dim)·I.
GenEigResult gen_sym_eig(const Matrix& a, const Matrix& b, double ridge = 0.0);

/// Thin SVD by one-sided Jacobi rotations.
SvdResult svd(const Matrix& m);

/// Orthonormal basis of the numerical column span: singular directions
/// with σ ≥ rel_tol·σ_max.
BasisResult orthonormal_basis(const Matrix& columns,
                              double rel_tol = kDefaultRankTolerance);

/// Principal angles (radians, ascending) between the column spans of two
/// matrices with orthonormal columns. Returns min(p, q) angles.
Vector principal_angles(const Matrix& u, const Matrix& v);

/// Canonical correlations (descending) between two multichannel signals
/// given as channels × samples. Each signal is mean-centered per channel;
/// the result is the cosine of the principal angles between the spans of
/// their sample vectors.
Vector canonical_correlations(const Matrix& x, const Matrix& y);

/// Applies the sign convention to each column in place.
void normalize_column_signs(Matrix& m);

}  // namespace dyca
