#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spud/matrix.hpp"
#include "spud/random.hpp"

namespace spud {

struct RecoveryOptions {
  /// An entry of a candidate row counts as zero when |s_i| <= zero_tol * max|s|.
  double zero_tol = 1e-8;
  /// Relative pivot tolerance for the running rank test in Greedy.
  double rank_tol = 1e-10;
  /// Two columns are collinear when |cos| >= 1 - collinear_tol.
  double collinear_tol = 1e-8;
  /// Minimum |cos| deficit accepted when matching recovered rows to known
  /// augmentation rows in rectangular recovery.
  double augmentation_match_tol = 1e-6;
  /// Law of the augmentation block B (rectangular recovery).
  Law augmentation_law = Law::Rademacher;
  std::size_t jobs = 1;
};

enum class RecoveryStatus {
  Success,
  TooFewColumns,   ///< very-sparse: fewer than n well-represented groups
  TooManyColumns,  ///< very-sparse: more than n well-represented groups
};

std::string_view status_name(RecoveryStatus status);

struct RecoveryDiagnostics {
  std::size_t solves = 0;
  std::size_t failed_solves = 0;
  std::size_t discarded_candidates = 0;
  std::size_t groups = 0;
  std::size_t well_represented = 0;
  /// Rank after each candidate Greedy examined.
  std::vector<std::size_t> rank_progression;
  std::vector<std::string> notes;
};

struct RecoveryResult {
  Matrix a_hat;
  Matrix x_hat;
  /// ER-SpUD: index of the column pair that produced each row of x_hat.
  /// Very-sparse: group id behind each column of a_hat.
  std::vector<std::size_t> row_sources;
  RecoveryStatus status = RecoveryStatus::Success;
  RecoveryDiagnostics diagnostics;
};

/// Candidate rows produced by ER-SpUD, one per column pair whose l1 solve
/// succeeded.
struct CandidateSet {
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> pair_index;  ///< pairing j behind rows[i]
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::size_t solves = 0;
  std::size_t failed_solves = 0;
};

/// Randomly pairs the columns of Y (dropping the last one when p is odd)
/// and solves min ||w^T Y||_1 s.t. r_j^T w = 1 with r_j = Y e_j1 + Y e_j2.
CandidateSet erspud(const Matrix& y, const Seed& seed, const RecoveryOptions& options = {});

/// Numeric l0 norm: entries with |s_i| > zero_tol * max|s|.
std::size_t count_nonzeros(std::span<const double> row, double zero_tol);

/// Picks candidates in ascending l0 (ties by lowest index), keeping each one
/// only if it raises the rank, until rank n. Then A = Y Y^T (X Y^T)^{-1}.
/// Throws RecoveryFailed if rank n is never reached.
RecoveryResult greedy(const CandidateSet& candidates, std::size_t n, const Matrix& y,
                      const RecoveryOptions& options = {});

/// ER-SpUD followed by Greedy for a square dictionary.
RecoveryResult recover_square(const Matrix& y, const Seed& seed,
                              const RecoveryOptions& options = {});

/// Rectangular dictionary (n x m, m < n): augments Y with B Z, runs the
/// square recovery, then strips the rows matching Z and the matching columns
/// of A'. `model` supplies the law and sparsity of Z; its m, p and seed
/// fields are ignored.
RecoveryResult recover_rectangular(const Matrix& y, std::size_t m, const SparseModel& model,
                                   const Seed& seed, const RecoveryOptions& options = {});

struct GroupPartition {
  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::size_t> representatives;
  /// Index into groups of the all-zero columns, or groups.size() if none.
  std::size_t zero_group = 0;
};

/// Splits the columns of Y into groups of mutual scalar multiples.
GroupPartition partition_collinear(const Matrix& y, double collinear_tol);

/// Very-sparse recovery: representatives of groups with more than two
/// members become the columns of A (unit norm). When exactly n such groups
/// exist, x_hat is completed by solving A x = Y.
RecoveryResult recover_verysparse(const Matrix& y, const RecoveryOptions& options = {});

}  // namespace spud
