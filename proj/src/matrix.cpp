#include "spud/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "spud/errors.hpp"

namespace spud {

namespace {

void require_finite(std::span<const double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) throw InvalidArgument("matrix entries must be finite");
  }
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvalidArgument(std::string(op) + ": dimension mismatch " + std::to_string(a.rows()) +
                          "x" + std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                          "x" + std::to_string(b.cols()));
  }
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
  if (!std::isfinite(fill)) throw InvalidArgument("matrix entries must be finite");
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw InvalidArgument("matrix data length " + std::to_string(data_.size()) +
                          " does not match " + std::to_string(rows_) + "x" +
                          std::to_string(cols_));
  }
  require_finite(data_);
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw InvalidArgument("ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
  require_finite(data_);
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> diag) {
  Matrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  require_finite(m.data());
  return m;
}

Matrix Matrix::column(std::span<const double> values) {
  return Matrix(values.size(), 1, std::vector<double>(values.begin(), values.end()));
}

std::vector<double> Matrix::col(std::size_t c) const {
  std::vector<double> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

double Matrix::max_abs() const noexcept { return spud::max_abs(data_); }

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw InvalidArgument("matmul: inner dimensions differ (" + std::to_string(a.cols()) +
                          " vs " + std::to_string(b.rows()) + ")");
  }
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto dst = out.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      auto src = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) dst[j] += aik * src[j];
    }
  }
  return out;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "add");
  Matrix out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] += b.data()[i];
  return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "subtract");
  Matrix out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] -= b.data()[i];
  return out;
}

Matrix operator*(double s, const Matrix& m) {
  Matrix out = m;
  for (double& v : out.data()) v *= s;
  return out;
}

double frobenius_norm(const Matrix& m) { return norm2(m.data()); }

Matrix row_block(const Matrix& m, std::size_t first, std::size_t count) {
  if (first + count > m.rows()) throw InvalidArgument("row_block out of range");
  auto src = m.data().subspan(first * m.cols(), count * m.cols());
  return Matrix(count, m.cols(), std::vector<double>(src.begin(), src.end()));
}

Matrix col_block(const Matrix& m, std::size_t first, std::size_t count) {
  if (first + count > m.cols()) throw InvalidArgument("col_block out of range");
  Matrix out(m.rows(), count);
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < count; ++c) out(r, c) = m(r, first + c);
  return out;
}

Matrix select_rows(const Matrix& m, std::span<const std::size_t> indices) {
  Matrix out(indices.size(), m.cols());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= m.rows()) throw InvalidArgument("select_rows index out of range");
    std::ranges::copy(m.row(indices[i]), out.row(i).begin());
  }
  return out;
}

Matrix select_cols(const Matrix& m, std::span<const std::size_t> indices) {
  Matrix out(m.rows(), indices.size());
  for (std::size_t j = 0; j < indices.size(); ++j) {
    if (indices[j] >= m.cols()) throw InvalidArgument("select_cols index out of range");
    for (std::size_t r = 0; r < m.rows(); ++r) out(r, j) = m(r, indices[j]);
  }
  return out;
}

Matrix vstack(const Matrix& top, const Matrix& bottom) {
  if (top.cols() != bottom.cols()) throw InvalidArgument("vstack: column counts differ");
  std::vector<double> data(top.data().begin(), top.data().end());
  data.insert(data.end(), bottom.data().begin(), bottom.data().end());
  return Matrix(top.rows() + bottom.rows(), top.cols(), std::move(data));
}

Matrix hstack(const Matrix& left, const Matrix& right) {
  if (left.rows() != right.rows()) throw InvalidArgument("hstack: row counts differ");
  Matrix out(left.rows(), left.cols() + right.cols());
  for (std::size_t r = 0; r < out.rows(); ++r) {
    std::ranges::copy(left.row(r), out.row(r).begin());
    std::ranges::copy(right.row(r), out.row(r).begin() + static_cast<std::ptrdiff_t>(left.cols()));
  }
  return out;
}

double default_tolerance(const Matrix& m) { return 1e-10 * m.max_abs(); }

std::size_t rank(const Matrix& m, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("rank: tolerance must be positive");
  const double threshold = tol * m.max_abs();
  if (threshold == 0.0) return 0;

  Matrix work = m;
  std::size_t pivot_row = 0;
  for (std::size_t c = 0; c < work.cols() && pivot_row < work.rows(); ++c) {
    std::size_t best = pivot_row;
    for (std::size_t r = pivot_row + 1; r < work.rows(); ++r)
      if (std::abs(work(r, c)) > std::abs(work(best, c))) best = r;
    if (std::abs(work(best, c)) <= threshold) continue;
    if (best != pivot_row) std::swap_ranges(work.row(best).begin(), work.row(best).end(),
                                            work.row(pivot_row).begin());
    const double pivot = work(pivot_row, c);
    for (std::size_t r = pivot_row + 1; r < work.rows(); ++r) {
      const double f = work(r, c) / pivot;
      if (f == 0.0) continue;
      for (std::size_t k = c; k < work.cols(); ++k) work(r, k) -= f * work(pivot_row, k);
    }
    ++pivot_row;
  }
  return pivot_row;
}

Matrix solve(const Matrix& a, const Matrix& b, double tol) {
  if (a.rows() != a.cols()) throw InvalidArgument("solve: matrix is not square");
  if (b.rows() != a.rows()) throw InvalidArgument("solve: right-hand side row count mismatch");
  if (!(tol > 0.0)) throw InvalidArgument("solve: tolerance must be positive");
  const std::size_t n = a.rows();
  const double threshold = tol * a.max_abs();

  Matrix lu = a;
  Matrix x = b;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t best = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(lu(r, c)) > std::abs(lu(best, c))) best = r;
    const double pivot_mag = std::abs(lu(best, c));
    if (pivot_mag <= threshold || pivot_mag == 0.0) {
      throw SingularMatrix("solve: matrix is singular to tolerance at column " +
                               std::to_string(c),
                           pivot_mag);
    }
    if (best != c) {
      std::swap_ranges(lu.row(best).begin(), lu.row(best).end(), lu.row(c).begin());
      std::swap_ranges(x.row(best).begin(), x.row(best).end(), x.row(c).begin());
    }
    const double pivot = lu(c, c);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = lu(r, c) / pivot;
      if (f == 0.0) continue;
      for (std::size_t k = c; k < n; ++k) lu(r, k) -= f * lu(c, k);
      for (std::size_t k = 0; k < x.cols(); ++k) x(r, k) -= f * x(c, k);
    }
  }
  for (std::size_t c = n; c-- > 0;) {
    for (std::size_t k = 0; k < x.cols(); ++k) {
      double s = x(c, k);
      for (std::size_t j = c + 1; j < n; ++j) s -= lu(c, j) * x(j, k);
      x(c, k) = s / lu(c, c);
    }
  }
  return x;
}

Matrix inverse(const Matrix& a, double tol) { return solve(a, Matrix::identity(a.rows()), tol); }

std::vector<double> null_vector(const Matrix& m, double tol) {
  const double threshold = tol * m.max_abs();
  std::vector<double> v(m.cols(), 0.0);
  if (threshold == 0.0) {
    if (!v.empty()) v[0] = 1.0;
    return v;
  }
  // Reduced row echelon form; the first free column yields a null vector.
  Matrix work = m;
  std::vector<std::size_t> pivot_cols;
  std::size_t pivot_row = 0;
  std::size_t free_col = m.cols();
  for (std::size_t c = 0; c < work.cols(); ++c) {
    if (pivot_row == work.rows()) {
      free_col = c;
      break;
    }
    std::size_t best = pivot_row;
    for (std::size_t r = pivot_row + 1; r < work.rows(); ++r)
      if (std::abs(work(r, c)) > std::abs(work(best, c))) best = r;
    if (std::abs(work(best, c)) <= threshold) {
      free_col = c;
      break;
    }
    std::swap_ranges(work.row(best).begin(), work.row(best).end(), work.row(pivot_row).begin());
    const double pivot = work(pivot_row, c);
    for (double& e : work.row(pivot_row)) e /= pivot;
    for (std::size_t r = 0; r < work.rows(); ++r) {
      if (r == pivot_row) continue;
      const double f = work(r, c);
      if (f == 0.0) continue;
      for (std::size_t k = 0; k < work.cols(); ++k) work(r, k) -= f * work(pivot_row, k);
    }
    pivot_cols.push_back(c);
    ++pivot_row;
  }
  if (free_col == m.cols()) return {};
  v[free_col] = 1.0;
  for (std::size_t i = 0; i < pivot_cols.size(); ++i) v[pivot_cols[i]] = -work(i, free_col);
  return v;
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidArgument("dot: length mismatch");
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm1(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

double norm2(std::span<const double> v) { return std::sqrt(dot(v, v)); }

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace spud
