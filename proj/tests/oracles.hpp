#pragma once

// Brute-force reference implementations used to check the library at tiny sizes.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

#include "spud/matrix.hpp"

namespace oracle {

inline spud::Matrix triple_loop_matmul(const spud::Matrix& a, const spud::Matrix& b) {
  spud::Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      out(i, j) = s;
    }
  return out;
}

inline double det2(const spud::Matrix& m) { return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0); }

/// Determinant by cofactor expansion; fine for n <= 6.
inline double cofactor_det(const spud::Matrix& m) {
  const std::size_t n = m.rows();
  if (n == 1) return m(0, 0);
  if (n == 2) return det2(m);
  double total = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    spud::Matrix minor(n - 1, n - 1);
    for (std::size_t r = 1; r < n; ++r)
      for (std::size_t k = 0, kk = 0; k < n; ++k)
        if (k != c) minor(r - 1, kk++) = m(r, k);
    total += ((c % 2 == 0) ? 1.0 : -1.0) * m(0, c) * cofactor_det(minor);
  }
  return total;
}

/// Gauss-Jordan on a small dense system; returns false if (numerically) singular.
inline bool small_solve(std::vector<std::vector<double>> a, std::vector<double> b,
                        std::vector<double>& x) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t best = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[best][c])) best = r;
    if (std::abs(a[best][c]) < 1e-11) return false;
    std::swap(a[best], a[c]);
    std::swap(b[best], b[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  x.resize(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return true;
}

/// Minimum of ||Y^T w||_1 subject to r^T w = 1 over every vertex of the
/// feasible arrangement: points where n - 1 of the linear forms y_i^T w vanish.
/// Valid when Y has full row rank (then the minimum is attained at such a vertex).
inline double l1_vertex_minimum(const spud::Matrix& y, const std::vector<double>& r) {
  const std::size_t n = y.rows();
  const std::size_t p = y.cols();
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> pick(n - 1);
  std::vector<char> mask(p, 0);
  std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(n - 1), 1);
  do {
    std::vector<std::vector<double>> a;
    std::vector<double> b;
    for (std::size_t i = 0; i < p; ++i) {
      if (!mask[i]) continue;
      std::vector<double> row(n);
      for (std::size_t k = 0; k < n; ++k) row[k] = y(k, i);
      a.push_back(row);
      b.push_back(0.0);
    }
    a.push_back(r);
    b.push_back(1.0);
    std::vector<double> w;
    if (!small_solve(a, b, w)) continue;
    double obj = 0.0;
    for (std::size_t i = 0; i < p; ++i) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += y(k, i) * w[k];
      obj += std::abs(s);
    }
    best = std::min(best, obj);
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return best;
}

/// Minimum-cost perfect matching by trying all n! permutations.
inline double permutation_minimum(const spud::Matrix& cost) {
  std::vector<std::size_t> perm(cost.rows());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double best = std::numeric_limits<double>::infinity();
  do {
    double s = 0.0;
    for (std::size_t i = 0; i < perm.size(); ++i) s += cost(i, perm[i]);
    best = std::min(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

/// min over permutations and per-column least-squares scales of
/// ||A' Lambda Pi - A||_F / ||A||_F, evaluated directly from residuals.
inline double brute_relative_error(const spud::Matrix& a_hat, const spud::Matrix& a) {
  const std::size_t m = a.cols();
  std::vector<std::size_t> perm(m);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double best = std::numeric_limits<double>::infinity();
  double ref = 0.0;
  for (double v : a.data()) ref += v * v;
  do {
    double total = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t i = perm[j];
      double num = 0.0, den = 0.0;
      for (std::size_t r = 0; r < a.rows(); ++r) {
        num += a_hat(r, i) * a(r, j);
        den += a_hat(r, i) * a_hat(r, i);
      }
      const double lambda = den > 0.0 ? num / den : 0.0;
      for (std::size_t r = 0; r < a.rows(); ++r) {
        const double d = lambda * a_hat(r, i) - a(r, j);
        total += d * d;
      }
    }
    best = std::min(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::sqrt(best / ref);
}

/// E|X_1 v| under the Bernoulli(theta) Rademacher model by walking all 3^n
/// (chi, xi) patterns one at a time.
inline double rademacher_abs_mean_3n(const std::vector<double>& v, double theta) {
  const std::size_t n = v.size();
  std::size_t patterns = 1;
  for (std::size_t i = 0; i < n; ++i) patterns *= 3;
  double total = 0.0;
  for (std::size_t code = 0; code < patterns; ++code) {
    std::size_t c = code;
    double prob = 1.0;
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t digit = c % 3;
      c /= 3;
      if (digit == 0) {
        prob *= 1.0 - theta;
      } else {
        prob *= theta / 2.0;
        s += digit == 1 ? v[i] : -v[i];
      }
    }
    total += prob * std::abs(s);
  }
  return total;
}

inline double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

/// P(Binomial(n, q) outside [lo, hi]) by direct summation of the pmf in log space.
inline double binomial_outside(std::size_t n, double q, std::size_t lo, std::size_t hi) {
  double inside = 0.0;
  for (std::size_t k = lo; k <= hi && k <= n; ++k) {
    const double log_pmf = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) +
                           static_cast<double>(k) * std::log(q) +
                           static_cast<double>(n - k) * std::log1p(-q);
    inside += std::exp(log_pmf);
  }
  return 1.0 - inside;
}

}  // namespace oracle
