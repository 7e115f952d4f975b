#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "spud/matrix.hpp"

namespace spud {

/// Optimal alignment of a recovered dictionary A' to ground truth A.
struct MatchReport {
  /// assignment[j] is the column of A' matched to column j of A.
  std::vector<std::size_t> assignment;
  /// scales[j] multiplies column assignment[j] of A'.
  std::vector<double> scales;
  /// ||A' Lambda Pi - A||_F / ||A||_F at the optimal (Pi, Lambda).
  double rel_error = 0.0;
  /// ||scales[j] a'_{assignment[j]} - a_j||_2 for each column j of A.
  std::vector<double> per_column_errors;
};

/// Minimum-cost perfect matching on a square cost matrix.
/// Returns assignment[row] = column, and writes the optimal total to *total.
std::vector<std::size_t> hungarian(const Matrix& cost, double* total = nullptr);

MatchReport relative_error(const Matrix& a_hat, const Matrix& a);

/// Fraction of rows of X whose support (|x| > zero_tol * max|row|) equals
/// that of the aligned row of X_hat. `assignment` comes from a MatchReport on
/// the dictionaries; an empty span means identity alignment.
double support_match(const Matrix& x_hat, const Matrix& x, std::span<const std::size_t> assignment,
                     double zero_tol = 1e-8);

}  // namespace spud
