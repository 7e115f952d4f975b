#include "spud/l1_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "spud/errors.hpp"

namespace spud {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double l1_objective(const Matrix& y, std::span<const double> w) {
  double total = 0.0;
  for (std::size_t i = 0; i < y.cols(); ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < y.rows(); ++k) s += y(k, i) * w[k];
    total += std::abs(s);
  }
  return total;
}

// Re-solves the vertex system {y_i^T w = 0 for n - 1 independent zero forms,
// r^T w = 1} by elimination in row order, pivoting within each row. Returns
// an empty vector if w does not sit on a clean vertex or if the re-solved
// point satisfies the vertex equations less accurately than w.
std::vector<double> polish_vertex(const L1Problem& problem, std::span<const double> w) {
  const Matrix& y = problem.y;
  const std::size_t n = y.rows();
  const std::size_t p = y.cols();
  const double w_norm = norm2(w);
  if (w_norm == 0.0) return {};

  std::vector<std::pair<double, std::size_t>> zero_forms;
  for (std::size_t i = 0; i < p; ++i) {
    const auto col = y.col(i);
    const double scale = norm2(col) * w_norm;
    if (scale == 0.0) continue;
    const double rel = std::abs(dot(col, w)) / scale;
    if (rel <= 1e-9) zero_forms.emplace_back(rel, i);
  }
  std::ranges::stable_sort(zero_forms);

  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> pivots;
  std::vector<bool> used(n, false);
  auto reduce = [&](std::vector<double>& v) {
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const double f = v[pivots[k]];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) v[j] -= f * rows[k][j];
      v[pivots[k]] = 0.0;
    }
  };
  for (const auto& [rel, i] : zero_forms) {
    if (rows.size() + 1 == n) break;
    std::vector<double> v = y.col(i);
    const double size = norm2(v);
    reduce(v);
    std::size_t best = n;
    for (std::size_t j = 0; j < n; ++j)
      if (!used[j] && (best == n || std::abs(v[j]) > std::abs(v[best]))) best = j;
    if (best == n || std::abs(v[best]) <= 1e-10 * size) continue;
    const double piv = v[best];
    if (piv != 1.0)
      for (double& e : v) e /= piv;
    v[best] = 1.0;
    rows.push_back(std::move(v));
    pivots.push_back(best);
    used[best] = true;
  }
  if (rows.size() + 1 != n) return {};

  std::vector<double> last = problem.r;
  reduce(last);
  const auto free_col = static_cast<std::size_t>(std::ranges::find(used, false) - used.begin());
  if (std::abs(last[free_col]) <= 1e-12 * norm2(problem.r)) return {};

  std::vector<double> out(n, 0.0);
  out[free_col] = 1.0 / last[free_col];
  for (std::size_t k = rows.size(); k-- > 0;) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != pivots[k]) s += rows[k][j] * out[j];
    out[pivots[k]] = 0.0 - s;
  }
  for (double v : out)
    if (!std::isfinite(v)) return {};

  auto vertex_residual = [&](std::span<const double> x) {
    const double x_norm = norm2(x);
    double worst = 0.0;
    for (const auto& [rel, i] : zero_forms) {
      const auto col = y.col(i);
      worst = std::max(worst, std::abs(dot(col, x)) / (norm2(col) * x_norm));
    }
    return worst;
  };
  if (vertex_residual(out) > vertex_residual(w)) return {};
  return out;
}
}  // namespace

void L1Problem::validate() const {
  if (y.rows() == 0 || y.cols() == 0) throw InvalidArgument("l1 problem: Y must be non-empty");
  if (r.size() != y.rows())
    throw InvalidArgument("l1 problem: r has length " + std::to_string(r.size()) +
                          ", expected " + std::to_string(y.rows()));
  for (double v : r)
    if (!std::isfinite(v)) throw InvalidArgument("l1 problem: r must be finite");
}

L1LinearProgram to_lp(const L1Problem& problem) {
  problem.validate();
  const std::size_t n = problem.y.rows();
  const std::size_t p = problem.y.cols();
  L1LinearProgram lp;
  lp.n = n;
  lp.p = p;
  lp.cost.assign(n + p, 0.0);
  std::fill(lp.cost.begin() + static_cast<std::ptrdiff_t>(n), lp.cost.end(), 1.0);
  lp.a_ub = Matrix(2 * p, n + p);
  lp.b_ub.assign(2 * p, 0.0);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      lp.a_ub(2 * i, k) = problem.y(k, i);
      lp.a_ub(2 * i + 1, k) = -problem.y(k, i);
    }
    lp.a_ub(2 * i, n + i) = -1.0;
    lp.a_ub(2 * i + 1, n + i) = -1.0;
  }
  lp.a_eq = Matrix(1, n + p);
  for (std::size_t k = 0; k < n; ++k) lp.a_eq(0, k) = problem.r[k];
  lp.b_eq = {1.0};
  lp.lower.assign(n + p, 0.0);
  std::fill(lp.lower.begin(), lp.lower.begin() + static_cast<std::ptrdiff_t>(n), -kInf);
  lp.upper.assign(n + p, kInf);
  return lp;
}

double L1LinearProgram::evaluate(std::span<const double> x) const {
  if (x.size() != variables()) throw InvalidArgument("lp point has wrong length");
  return dot(cost, x);
}

bool L1LinearProgram::is_feasible(std::span<const double> x, double tol) const {
  if (x.size() != variables()) return false;
  for (std::size_t j = 0; j < x.size(); ++j)
    if (x[j] < lower[j] - tol || x[j] > upper[j] + tol) return false;
  for (std::size_t i = 0; i < a_ub.rows(); ++i)
    if (dot(a_ub.row(i), x) > b_ub[i] + tol) return false;
  for (std::size_t i = 0; i < a_eq.rows(); ++i)
    if (std::abs(dot(a_eq.row(i), x) - b_eq[i]) > tol) return false;
  return true;
}

std::vector<double> L1LinearProgram::lift(std::span<const double> w) const {
  if (w.size() != n) throw InvalidArgument("lift: w has wrong length");
  std::vector<double> x(w.begin(), w.end());
  x.resize(n + p, 0.0);
  for (std::size_t i = 0; i < p; ++i) x[n + i] = std::abs(dot(a_ub.row(2 * i).first(n), w));
  return x;
}

L1Solution solve_l1(const L1Problem& problem, const lp::SimplexOptions& options) {
  problem.validate();
  const std::size_t n = problem.y.rows();
  const std::size_t p = problem.y.cols();

  L1Solution sol;
  if (max_abs(problem.r) == 0.0) {
    sol.status = L1Status::Infeasible;
    return sol;
  }

  // Dual variables (u_1..u_p, lambda); minimize -lambda.
  lp::BoundedLp dual;
  dual.a = Matrix(n, p + 1);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < p; ++i) dual.a(k, i) = problem.y(k, i);
    dual.a(k, p) = -problem.r[k];
  }
  dual.b.assign(n, 0.0);
  dual.cost.assign(p + 1, 0.0);
  dual.cost[p] = -1.0;
  dual.lower.assign(p + 1, -1.0);
  dual.upper.assign(p + 1, 1.0);
  dual.lower[p] = -kInf;
  dual.upper[p] = kInf;

  const lp::SimplexResult res = lp::solve(dual, options);
  sol.iterations = res.iterations;
  if (res.status == lp::Status::Unbounded) {
    // An unbounded dual certifies that no w satisfies r^T w = 1.
    sol.status = L1Status::Infeasible;
    return sol;
  }
  if (res.status != lp::Status::Optimal) {
    sol.status = L1Status::Infeasible;
    return sol;
  }
  sol.status = L1Status::Optimal;
  sol.w = res.duals;
  sol.dual_objective = -res.objective;
  sol.objective = l1_objective(problem.y, sol.w);
  const std::vector<double> polished = polish_vertex(problem, sol.w);
  if (!polished.empty()) {
    const double polished_objective = l1_objective(problem.y, polished);
    if (polished_objective <= sol.objective * (1.0 + 1e-9) + 1e-300) {
      sol.w = polished;
      sol.objective = polished_objective;
    }
  }
  return sol;
}

}  // namespace spud
