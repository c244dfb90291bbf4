#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace dyca {

using Vector = std::vector<double>;

/// Dense real matrix, row-major storage.
///
/// A default-constructed matrix is 0x0; matrices with zero columns are
/// allowed so that rank-0 bases can be represented.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> diag);
  static Matrix from_columns(const std::vector<Vector>& columns);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }
  bool is_square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  Vector col(std::size_t j) const;
  void set_col(std::size_t j, std::span<const double> values);

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  Matrix transposed() const;
  /// Columns [first, first + count).
  Matrix columns(std::size_t first, std::size_t count) const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, std::span<const double> x);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);

/// aᵀ·b without materializing the transpose.
Matrix transpose_times(const Matrix& a, const Matrix& b);
/// a·bᵀ without materializing the transpose.
Matrix times_transpose(const Matrix& a, const Matrix& b);
Matrix hcat(const Matrix& a, const Matrix& b);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> v);
double frobenius_norm(const Matrix& m);
double max_abs(const Matrix& m);
double trace(const Matrix& m);
/// (M + Mᵀ)/2
Matrix symmetrized(const Matrix& m);
bool all_finite(const Matrix& m);

}  // namespace dyca
