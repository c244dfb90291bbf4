#pragma once

// Dynamical Component Analysis.
//
// A signal q(t) ∈ R^N is assumed to be driven by a low-dimensional ODE
// whose first m equations are linear. Directions u whose projected
// derivative q̇ᵀu is best explained by a linear combination of projected
// signals qᵀv solve the generalized eigenproblem
//
//     C1 C0⁻¹ C1ᵀ u = λ C2 u,
//
// and the least-squares residual of that fit is 1 − λ. Eigenvalues near
// one mark linear equations; the partner directions v = C0⁻¹ C1ᵀ u
// complete the subspace in which the dynamics closes.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dyca/linalg.hpp"
#include "dyca/matrix.hpp"
#include "dyca/signal.hpp"

namespace dyca {

inline constexpr double kDefaultThreshold = 0.95;
/// Relative C0-norm below which a partner direction is treated as
/// already contained in the projection subspace.
inline constexpr double kDefaultSubspaceTolerance = 0.1;
/// Eigenvalues above 1 + this are flagged (finite-sample overshoot).
inline constexpr double kUnityOvershoot = 1e-6;

/// Relative ridges tried in order; each is applied to both C0 and C2
/// as ridge·(trace/dim)·I. Escalation stops at the first success.
struct RidgePolicy {
  double initial = 0.0;
  std::vector<double> escalation{1e-10, 1e-8};
};

struct DycaSpectrum {
  Vector values;        // descending
  Matrix vectors;       // columns u_i, C2-normalized
  double ridge_used = 0.0;
  bool exceeds_unity = false;
};

struct DycaProjection {
  std::size_t m = 0;    // eigenvalues at or above threshold
  std::size_t n = 0;    // dimension of the combined span
  Matrix basis;         // N×n, orthonormal columns
  double threshold = kDefaultThreshold;
  Matrix u_part;        // N×m
  Matrix v_part;        // N×m, v_i = C0⁻¹ C1ᵀ u_i
};

struct DycaAmplitudes {
  TimeSeries series;
  std::optional<std::size_t> source_window;
};

struct CostPoint {
  Vector u;
  std::vector<Vector> v_set;
  Vector a;
};

struct FitOptions {
  RidgePolicy ridge;
  bool remove_mean = false;
  /// 0 = hardware concurrency.
  unsigned threads = 0;
};

struct WindowResult {
  std::size_t index = 0;
  double t_start = 0.0;
  std::optional<DycaSpectrum> spectrum;
  std::string error;  // set when spectrum is empty
};

DycaSpectrum fit(const CorrelationTriple& triple, const RidgePolicy& ridge = {});

/// C0⁻¹ C1ᵀ u, with C0 ridged by `ridge` as in fit().
Vector derive_v(std::span<const double> u, const CorrelationTriple& triple, double ridge = 0.0);

/// Keeps the eigenvectors with λ ≥ threshold, adds the components of
/// their partners that are C0-orthogonal to span{u} and have relative
/// C0-norm ≥ subspace_tol, and orthonormalizes the result.
DycaProjection build_projection(const DycaSpectrum& spectrum, const CorrelationTriple& triple,
                                double threshold = kDefaultThreshold,
                                double subspace_tol = kDefaultSubspaceTolerance);

/// amplitudes(j, k) = Σ_c basis(c, j)·ts(c, k); labels dyca_1..dyca_n.
DycaAmplitudes project(const TimeSeries& ts, const Matrix& basis);
DycaAmplitudes project(const TimeSeries& ts, const DycaProjection& projection);

/// Minimizer a of the cost for fixed u and v_set: solves
/// Σ_j a_j (v_jᵀ C0 v_r) = uᵀ C1 v_r for every r.
Vector optimal_coefficients(std::span<const double> u, const std::vector<Vector>& v_set,
                            const CorrelationTriple& triple);

/// D(u, v, a) = 1 − 2 Σ_j a_j (uᵀC1v_j)/(uᵀC2u) + Σ_jk a_j a_k (v_jᵀC0v_k)/(uᵀC2u).
double evaluate_cost(const CostPoint& point, const CorrelationTriple& triple);

/// Windowed fit: for every window, central difference → correlation
/// triple → fit. Failures are recorded per window. Windows are processed
/// in parallel; the output is ordered by window index and identical to a
/// serial run.
std::vector<WindowResult> dyca_windows(const TimeSeries& ts, const WindowSpec& spec,
                                       const FitOptions& options = {});

}  // namespace dyca
