#pragma once

#include <cstddef>
#include <vector>

#include "spud/matrix.hpp"

namespace spud::lp {

/// minimize cost^T x  subject to  a x = b,  lower <= x <= upper.
/// Bounds may be infinite; a variable with both bounds infinite is free.
struct BoundedLp {
  Matrix a;
  std::vector<double> b;
  std::vector<double> cost;
  std::vector<double> lower;
  std::vector<double> upper;

  void validate() const;
};

enum class Status { Optimal, Unbounded, Infeasible };

struct SimplexOptions {
  std::size_t max_iterations = 0;  ///< 0 selects 50 * (rows + cols) + 1000
  /// Consecutive degenerate pivots tolerated under largest-coefficient
  /// pricing before switching permanently to Bland's rule.
  std::size_t degenerate_streak_for_bland = 30;
  double optimality_tol = 1e-9;
  double feasibility_tol = 1e-9;
  double pivot_tol = 1e-11;
  bool bland_only = false;
};

struct SimplexResult {
  Status status = Status::Infeasible;
  std::vector<double> x;  ///< structural variables only
  /// Simplex multipliers y with reduced costs cost - a^T y at the final basis.
  std::vector<double> duals;
  /// Column index per row; values >= cols denote the artificial of row (v - cols).
  std::vector<std::size_t> basis;
  double objective = 0.0;
  std::size_t iterations = 0;
  bool used_bland = false;
};

/// Dense two-phase primal simplex for bounded variables. Throws
/// IterationLimit if the pivot budget is exhausted.
SimplexResult solve(const BoundedLp& problem, const SimplexOptions& options = {});

}  // namespace spud::lp
