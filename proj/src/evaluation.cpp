#include "spud/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spud/errors.hpp"

namespace spud {

std::vector<std::size_t> hungarian(const Matrix& cost, double* total) {
  if (cost.rows() != cost.cols()) throw InvalidArgument("hungarian: cost matrix must be square");
  const std::size_t n = cost.rows();
  constexpr double inf = std::numeric_limits<double>::infinity();

  // Potentials over 1-based rows/columns; column 0 is a virtual sentinel.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> row_of_col(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    row_of_col[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = row_of_col[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[row_of_col[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (row_of_col[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      row_of_col[j0] = row_of_col[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<std::size_t> assignment(n);
  for (std::size_t j = 1; j <= n; ++j) assignment[row_of_col[j] - 1] = j - 1;
  if (total != nullptr) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += cost(i, assignment[i]);
    *total = s;
  }
  return assignment;
}

MatchReport relative_error(const Matrix& a_hat, const Matrix& a) {
  if (a_hat.rows() != a.rows() || a_hat.cols() != a.cols())
    throw InvalidArgument("relative_error: dictionaries differ in shape");
  const double a_norm = frobenius_norm(a);
  if (a_norm == 0.0) throw InvalidArgument("relative_error: reference dictionary is zero");
  const std::size_t m = a.cols();

  std::vector<std::vector<double>> hat_cols(m), ref_cols(m);
  std::vector<double> hat_sq(m), ref_sq(m);
  for (std::size_t j = 0; j < m; ++j) {
    hat_cols[j] = a_hat.col(j);
    ref_cols[j] = a.col(j);
    hat_sq[j] = dot(hat_cols[j], hat_cols[j]);
    ref_sq[j] = dot(ref_cols[j], ref_cols[j]);
  }

  // cost(i, j): residual of the least-squares fit lambda * a'_i ~ a_j.
  Matrix cost(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (hat_sq[i] == 0.0) {
        cost(i, j) = ref_sq[j];
        continue;
      }
      const double c = dot(hat_cols[i], ref_cols[j]);
      cost(i, j) = std::max(0.0, ref_sq[j] - c * c / hat_sq[i]);
    }
  }
  const std::vector<std::size_t> hat_to_ref = hungarian(cost);

  MatchReport report;
  report.assignment.assign(m, 0);
  report.scales.assign(m, 0.0);
  report.per_column_errors.assign(m, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = hat_to_ref[i];
    report.assignment[j] = i;
    const double lambda = hat_sq[i] == 0.0 ? 0.0 : dot(hat_cols[i], ref_cols[j]) / hat_sq[i];
    report.scales[j] = lambda;
    // Evaluate the residual directly rather than through the cost formula
    // to avoid cancellation when the fit is nearly exact.
    double sq = 0.0;
    for (std::size_t k = 0; k < a.rows(); ++k) {
      const double d = lambda * hat_cols[i][k] - ref_cols[j][k];
      sq += d * d;
    }
    report.per_column_errors[j] = std::sqrt(sq);
    total += sq;
  }
  report.rel_error = std::sqrt(total) / a_norm;
  return report;
}

double support_match(const Matrix& x_hat, const Matrix& x, std::span<const std::size_t> assignment,
                     double zero_tol) {
  if (x_hat.rows() != x.rows() || x_hat.cols() != x.cols())
    throw InvalidArgument("support_match: coefficient matrices differ in shape");
  if (!assignment.empty() && assignment.size() != x.rows())
    throw InvalidArgument("support_match: assignment length must equal row count");
  if (x.rows() == 0) return 1.0;

  auto support_equal = [zero_tol](std::span<const double> a, std::span<const double> b) {
    const double ca = zero_tol * max_abs(a);
    const double cb = zero_tol * max_abs(b);
    for (std::size_t k = 0; k < a.size(); ++k)
      if ((std::abs(a[k]) > ca) != (std::abs(b[k]) > cb)) return false;
    return true;
  };
  std::size_t matches = 0;
  for (std::size_t j = 0; j < x.rows(); ++j) {
    const std::size_t i = assignment.empty() ? j : assignment[j];
    if (support_equal(x_hat.row(i), x.row(j))) ++matches;
  }
  return static_cast<double>(matches) / static_cast<double>(x.rows());
}

}  // namespace spud
