#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace spud {

/// Dense real matrix stored row-major.
///
/// Every constructor that accepts data rejects NaN and infinities, so a
/// Matrix obtained from the public API is always finite.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> diag);
  static Matrix column(std::span<const double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::vector<double> col(std::size_t c) const;

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  Matrix transpose() const;
  double max_abs() const noexcept;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& m);

double frobenius_norm(const Matrix& m);

/// Rows [first, first + count) as a new matrix.
Matrix row_block(const Matrix& m, std::size_t first, std::size_t count);
/// Columns [first, first + count) as a new matrix.
Matrix col_block(const Matrix& m, std::size_t first, std::size_t count);
Matrix select_rows(const Matrix& m, std::span<const std::size_t> indices);
Matrix select_cols(const Matrix& m, std::span<const std::size_t> indices);
Matrix vstack(const Matrix& top, const Matrix& bottom);
Matrix hstack(const Matrix& left, const Matrix& right);

/// Tolerance used when callers pass no explicit one: 1e-10 * max|m_ij|.
double default_tolerance(const Matrix& m);

/// Number of pivots exceeding tol * max|m_ij| under Gaussian elimination
/// with partial pivoting. tol must be positive.
std::size_t rank(const Matrix& m, double tol = 1e-10);

/// Solves a * x = b for square a with LU and partial pivoting.
/// Throws SingularMatrix when a pivot is at or below tol * max|a_ij|.
Matrix solve(const Matrix& a, const Matrix& b, double tol = 1e-10);

Matrix inverse(const Matrix& a, double tol = 1e-10);

/// A nonzero v with m * v = 0, or an empty vector when m has full column rank.
std::vector<double> null_vector(const Matrix& m, double tol = 1e-10);

double dot(std::span<const double> a, std::span<const double> b);
double norm1(std::span<const double> v);
double norm2(std::span<const double> v);
double max_abs(std::span<const double> v);

}  // namespace spud
