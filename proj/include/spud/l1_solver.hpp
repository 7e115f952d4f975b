#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "spud/matrix.hpp"
#include "spud/simplex.hpp"

namespace spud {

/// minimize ||Y^T w||_1 subject to r^T w = 1, with Y of shape n x p.
struct L1Problem {
  Matrix y;
  std::vector<double> r;

  void validate() const;
};

enum class L1Status { Optimal, Unbounded, Infeasible };

struct L1Solution {
  std::vector<double> w;
  double objective = 0.0;  ///< ||Y^T w||_1 evaluated at w
  L1Status status = L1Status::Infeasible;
  std::size_t iterations = 0;
  /// Optimal value of the dual program; equals objective at optimality.
  double dual_objective = 0.0;
};

/// The l1 program as a linear program over (w, t), t in R^p:
///   minimize sum t  s.t.  Y^T w - t <= 0,  -Y^T w - t <= 0,  r^T w = 1,  t >= 0.
struct L1LinearProgram {
  std::size_t n = 0;  ///< number of w variables (free)
  std::size_t p = 0;  ///< number of t variables (nonnegative)
  std::vector<double> cost;
  Matrix a_ub;  ///< 2p x (n + p)
  std::vector<double> b_ub;
  Matrix a_eq;  ///< 1 x (n + p)
  std::vector<double> b_eq;
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t variables() const noexcept { return n + p; }
  double evaluate(std::span<const double> x) const;
  bool is_feasible(std::span<const double> x, double tol = 1e-9) const;
  /// Embeds a w into LP coordinates with the tightest t = |Y^T w|.
  std::vector<double> lift(std::span<const double> w) const;
};

L1LinearProgram to_lp(const L1Problem& problem);

/// Solves the l1 program exactly.
///
/// The simplex runs on the LP dual of to_lp(problem),
///   maximize lambda  s.t.  Y u = lambda r,  -1 <= u <= 1,
/// which has n equality rows instead of 2p + 1. The returned w is the
/// vector of simplex multipliers at the optimal basis, i.e. a vertex
/// optimizer of the primal LP: r^T w = 1 and (Y^T w)_i = 0 for every basic
/// u_i, so at least n - 1 entries of w^T Y vanish. When those zero forms
/// pin down a unique vertex, w is re-solved from them directly to strip the
/// round-off left by the basis factorization.
L1Solution solve_l1(const L1Problem& problem, const lp::SimplexOptions& options = {});

}  // namespace spud
