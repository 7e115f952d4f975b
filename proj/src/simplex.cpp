#include "spud/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "spud/errors.hpp"

namespace spud::lp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Entering {
  std::size_t col;
  double direction;  // +1 increase, -1 decrease
};

class Tableau {
 public:
  Tableau(const BoundedLp& lp, const SimplexOptions& opt)
      : lp_(lp),
        opt_(opt),
        m_(lp.a.rows()),
        n_(lp.a.cols()),
        cols_(n_ + m_),
        t_(m_, cols_),
        x_(cols_, 0.0),
        lo_(cols_, 0.0),
        up_(cols_, kInf),
        cost_(cols_, 0.0),
        d_(cols_, 0.0),
        can_enter_(cols_, 1),
        basic_(cols_, 0),
        sign_(m_, 1.0),
        basis_(m_) {
    for (std::size_t j = 0; j < n_; ++j) {
      lo_[j] = lp.lower[j];
      up_[j] = lp.upper[j];
      if (std::isfinite(lo_[j]))
        x_[j] = lo_[j];
      else if (std::isfinite(up_[j]))
        x_[j] = up_[j];
    }
    for (std::size_t i = 0; i < m_; ++i) {
      double residual = lp.b[i];
      for (std::size_t j = 0; j < n_; ++j) residual -= lp.a(i, j) * x_[j];
      sign_[i] = residual >= 0.0 ? 1.0 : -1.0;
      for (std::size_t j = 0; j < n_; ++j) t_(i, j) = sign_[i] * lp.a(i, j);
      t_(i, n_ + i) = 1.0;
      x_[n_ + i] = std::abs(residual);
      basis_[i] = n_ + i;
      basic_[n_ + i] = 1;
    }
    max_iterations_ = opt.max_iterations != 0 ? opt.max_iterations : 50 * (m_ + n_) + 1000;
    bland_ = opt.bland_only;
  }

  SimplexResult run() {
    SimplexResult result;

    // Phase 1: drive the artificials to zero.
    for (std::size_t i = 0; i < m_; ++i) cost_[n_ + i] = 1.0;
    if (iterate() == Status::Unbounded) {
      // Cannot happen: phase-1 objective is bounded below by zero.
      throw IterationLimit("simplex phase 1 reported unbounded");
    }
    double infeasibility = 0.0;
    double b_scale = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      infeasibility += x_[n_ + i];
      b_scale = std::max(b_scale, std::abs(lp_.b[i]));
    }
    if (infeasibility > opt_.feasibility_tol * b_scale * static_cast<double>(std::max<std::size_t>(m_, 1))) {
      return finish(Status::Infeasible, std::move(result));
    }

    // Phase 2: artificials pinned at zero and barred from re-entering.
    for (std::size_t i = 0; i < m_; ++i) {
      const std::size_t a = n_ + i;
      cost_[a] = 0.0;
      up_[a] = 0.0;
      can_enter_[a] = 0;
      if (!basic_[a]) x_[a] = 0.0;
    }
    for (std::size_t j = 0; j < n_; ++j) cost_[j] = lp_.cost[j];
    const Status status = iterate();
    return finish(status, std::move(result));
  }

 private:
  void recompute_reduced_costs() {
    for (std::size_t j = 0; j < cols_; ++j) {
      double s = cost_[j];
      for (std::size_t r = 0; r < m_; ++r) s -= cost_[basis_[r]] * t_(r, j);
      d_[j] = basic_[j] ? 0.0 : s;
    }
  }

  bool pick_entering(Entering& out) const {
    double best = 0.0;
    bool found = false;
    for (std::size_t j = 0; j < cols_; ++j) {
      if (basic_[j] || !can_enter_[j]) continue;
      const bool can_up = x_[j] < up_[j];
      const bool can_down = x_[j] > lo_[j];
      double dir = 0.0;
      if (d_[j] < -opt_.optimality_tol && can_up)
        dir = 1.0;
      else if (d_[j] > opt_.optimality_tol && can_down)
        dir = -1.0;
      if (dir == 0.0) continue;
      if (bland_) {
        out = {j, dir};
        return true;
      }
      if (std::abs(d_[j]) > best) {
        best = std::abs(d_[j]);
        out = {j, dir};
        found = true;
      }
    }
    return found;
  }

  Status iterate() {
    recompute_reduced_costs();
    std::size_t degenerate_streak = 0;
    while (true) {
      Entering in{};
      if (!pick_entering(in)) return Status::Optimal;
      if (++iterations_ > max_iterations_) {
        throw IterationLimit("simplex exceeded " + std::to_string(max_iterations_) +
                             " iterations (cycling guard)");
      }
      const std::size_t q = in.col;
      const double dir = in.direction;

      // Ratio test over basic variables plus the entering variable's own span.
      const double span = up_[q] - lo_[q];  // may be +inf
      double step = kInf;
      std::size_t leave_row = m_;
      double leave_pivot = 0.0;
      for (std::size_t r = 0; r < m_; ++r) {
        const double tq = t_(r, q);
        if (std::abs(tq) <= opt_.pivot_tol) continue;
        const std::size_t bv = basis_[r];
        const double rate = -dir * tq;  // d x_bv / d step
        double limit;
        if (rate < 0.0) {
          if (!std::isfinite(lo_[bv])) continue;
          limit = (x_[bv] - lo_[bv]) / -rate;
        } else {
          if (!std::isfinite(up_[bv])) continue;
          limit = (up_[bv] - x_[bv]) / rate;
        }
        limit = std::max(limit, 0.0);
        if (leave_row == m_ || limit < step - 1e-12) {
          step = limit;
          leave_row = r;
          leave_pivot = std::abs(tq);
        } else if (limit <= step + 1e-12) {
          const bool prefer = bland_ ? bv < basis_[leave_row] : std::abs(tq) > leave_pivot;
          if (prefer) {
            leave_row = r;
            leave_pivot = std::abs(tq);
            step = std::min(step, limit);
          }
        }
      }
      if (span <= step) {
        step = span;
        leave_row = m_;
      }
      if (!std::isfinite(step)) return Status::Unbounded;

      if (step <= 1e-12) {
        if (++degenerate_streak >= opt_.degenerate_streak_for_bland) bland_ = true;
      } else {
        degenerate_streak = 0;
      }

      for (std::size_t r = 0; r < m_; ++r) x_[basis_[r]] -= dir * t_(r, q) * step;

      if (leave_row == m_) {
        // Bound flip: the entering variable crosses to its other bound.
        x_[q] = dir > 0.0 ? up_[q] : lo_[q];
        continue;
      }

      x_[q] += dir * step;
      const std::size_t leaving = basis_[leave_row];
      // Snap the leaving variable onto the bound it reached.
      const double rate = -dir * t_(leave_row, q);
      x_[leaving] = rate < 0.0 ? lo_[leaving] : up_[leaving];
      pivot(leave_row, q);
      basic_[leaving] = 0;
      basic_[q] = 1;
      basis_[leave_row] = q;
    }
  }

  void pivot(std::size_t row, std::size_t col) {
    auto prow = t_.row(row);
    const double inv = 1.0 / prow[col];
    for (double& v : prow) v *= inv;
    prow[col] = 1.0;
    for (std::size_t r = 0; r < m_; ++r) {
      if (r == row) continue;
      const double f = t_(r, col);
      if (f == 0.0) continue;
      auto dst = t_.row(r);
      for (std::size_t j = 0; j < cols_; ++j) dst[j] -= f * prow[j];
      dst[col] = 0.0;
    }
    const double f = d_[col];
    if (f != 0.0) {
      for (std::size_t j = 0; j < cols_; ++j) d_[j] -= f * prow[j];
    }
    d_[col] = 0.0;
  }

  /// Basis matrix column for variable j (structural or signed unit artificial).
  double basis_entry(std::size_t i, std::size_t j) const {
    if (j < n_) return lp_.a(i, j);
    return (j - n_ == i) ? sign_[i] : 0.0;
  }

  SimplexResult finish(Status status, SimplexResult result) {
    result.status = status;
    result.iterations = iterations_;
    result.used_bland = bland_;
    result.basis = basis_;

    // Re-derive basic values and multipliers from a fresh factorization of
    // the final basis to shed accumulated tableau round-off.
    Matrix basis_mat(m_, m_);
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t r = 0; r < m_; ++r) basis_mat(i, r) = basis_entry(i, basis_[r]);
    Matrix rhs(m_, 1);
    Matrix cb(m_, 1);
    for (std::size_t i = 0; i < m_; ++i) {
      double s = lp_.b[i];
      for (std::size_t j = 0; j < cols_; ++j)
        if (!basic_[j]) s -= basis_entry(i, j) * x_[j];
      rhs(i, 0) = s;
      cb(i, 0) = cost_[basis_[i]];
    }
    result.duals.assign(m_, 0.0);
    if (m_ > 0) {
      try {
        const Matrix xb = spud::solve(basis_mat, rhs, 1e-14);
        const Matrix y = spud::solve(basis_mat.transpose(), cb, 1e-14);
        for (std::size_t r = 0; r < m_; ++r) {
          const std::size_t j = basis_[r];
          double v = xb(r, 0);
          // Clamp round-off just outside a bound.
          if (v < lo_[j]) v = lo_[j];
          if (v > up_[j]) v = up_[j];
          x_[j] = v;
          result.duals[r] = y(r, 0);
        }
      } catch (const SingularMatrix&) {
        for (std::size_t i = 0; i < m_; ++i) {
          double s = 0.0;
          for (std::size_t r = 0; r < m_; ++r) s += cost_[basis_[r]] * t_(r, n_ + i);
          result.duals[i] = s * sign_[i];
        }
      }
    }
    result.x.assign(x_.begin(), x_.begin() + static_cast<std::ptrdiff_t>(n_));
    result.objective = 0.0;
    for (std::size_t j = 0; j < n_; ++j) result.objective += lp_.cost[j] * result.x[j];
    return result;
  }

  const BoundedLp& lp_;
  SimplexOptions opt_;
  std::size_t m_, n_, cols_;
  Matrix t_;
  std::vector<double> x_, lo_, up_, cost_, d_;
  std::vector<char> can_enter_, basic_;
  std::vector<double> sign_;
  std::vector<std::size_t> basis_;
  std::size_t iterations_ = 0;
  std::size_t max_iterations_ = 0;
  bool bland_ = false;
};

}  // namespace

void BoundedLp::validate() const {
  const std::size_t n = a.cols();
  if (b.size() != a.rows()) throw InvalidArgument("lp: b length must equal row count");
  if (cost.size() != n || lower.size() != n || upper.size() != n)
    throw InvalidArgument("lp: cost/bound lengths must equal column count");
  for (std::size_t j = 0; j < n; ++j) {
    if (std::isnan(lower[j]) || std::isnan(upper[j]) || lower[j] > upper[j])
      throw InvalidArgument("lp: invalid bounds for variable " + std::to_string(j));
    if (lower[j] == kInf || upper[j] == -kInf)
      throw InvalidArgument("lp: bound at wrong infinity for variable " + std::to_string(j));
    if (!std::isfinite(cost[j])) throw InvalidArgument("lp: cost must be finite");
  }
}

SimplexResult solve(const BoundedLp& problem, const SimplexOptions& options) {
  problem.validate();
  Tableau tableau(problem, options);
  return tableau.run();
}

}  // namespace spud::lp
