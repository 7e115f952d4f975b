#include "spud/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "spud/errors.hpp"
#include "spud/l1_solver.hpp"
#include "spud/parallel.hpp"

namespace spud {

std::string_view status_name(RecoveryStatus status) {
  switch (status) {
    case RecoveryStatus::Success:
      return "success";
    case RecoveryStatus::TooFewColumns:
      return "too_few_columns";
    case RecoveryStatus::TooManyColumns:
      return "too_many_columns";
  }
  return "unknown";
}

CandidateSet erspud(const Matrix& y, const Seed& seed, const RecoveryOptions& options) {
  const std::size_t n = y.rows();
  const std::size_t p = y.cols();
  if (p < 2) throw InvalidArgument("erspud: need at least two columns");

  std::vector<std::size_t> order(p);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed.child(0));
  rng.shuffle(std::span<std::size_t>(order));

  CandidateSet out;
  const std::size_t pair_count = p / 2;
  out.pairs.reserve(pair_count);
  for (std::size_t j = 0; j < pair_count; ++j) out.pairs.emplace_back(order[2 * j], order[2 * j + 1]);

  std::vector<std::vector<double>> rows(pair_count);
  std::vector<char> ok(pair_count, 0);
  parallel_for(pair_count, options.jobs, [&](std::size_t j) {
    const auto [c1, c2] = out.pairs[j];
    L1Problem problem{y, std::vector<double>(n)};
    for (std::size_t k = 0; k < n; ++k) problem.r[k] = y(k, c1) + y(k, c2);
    L1Solution sol;
    try {
      sol = solve_l1(problem);
    } catch (const IterationLimit&) {
      return;
    }
    if (sol.status != L1Status::Optimal) return;
    std::vector<double> s(p, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      const double wk = sol.w[k];
      if (wk == 0.0) continue;
      for (std::size_t i = 0; i < p; ++i) s[i] += wk * y(k, i);
    }
    rows[j] = std::move(s);
    ok[j] = 1;
  });

  out.solves = pair_count;
  for (std::size_t j = 0; j < pair_count; ++j) {
    if (!ok[j]) {
      ++out.failed_solves;
      continue;
    }
    out.rows.push_back(std::move(rows[j]));
    out.pair_index.push_back(j);
  }
  return out;
}

std::size_t count_nonzeros(std::span<const double> row, double zero_tol) {
  const double cutoff = zero_tol * max_abs(row);
  return static_cast<std::size_t>(
      std::ranges::count_if(row, [cutoff](double v) { return std::abs(v) > cutoff; }));
}

RecoveryResult greedy(const CandidateSet& candidates, std::size_t n, const Matrix& y,
                      const RecoveryOptions& options) {
  const std::size_t p = y.cols();
  if (y.rows() != n) throw InvalidArgument("greedy: Y must have n rows");
  for (const auto& s : candidates.rows)
    if (s.size() != p) throw InvalidArgument("greedy: candidate length differs from p");

  std::vector<std::size_t> l0(candidates.rows.size());
  for (std::size_t i = 0; i < l0.size(); ++i) {
    // All-zero candidates can never raise the rank; sort them last.
    l0[i] = max_abs(candidates.rows[i]) == 0.0 ? p + 1
                                               : count_nonzeros(candidates.rows[i], options.zero_tol);
  }
  std::vector<std::size_t> order(l0.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::ranges::stable_sort(order, [&](std::size_t a, std::size_t b) { return l0[a] < l0[b]; });

  RecoveryResult result;
  std::vector<std::size_t> chosen;
  // Rows rescaled to unit max so the rank tolerance is scale-free.
  std::vector<double> stacked;
  stacked.reserve(n * p);
  for (std::size_t idx : order) {
    if (chosen.size() == n) break;
    const auto& s = candidates.rows[idx];
    const double scale = max_abs(s);
    if (scale == 0.0) {
      ++result.diagnostics.discarded_candidates;
      result.diagnostics.rank_progression.push_back(chosen.size());
      continue;
    }
    const std::size_t before = stacked.size();
    for (double v : s) stacked.push_back(v / scale);
    const Matrix trial(chosen.size() + 1, p, stacked);
    if (rank(trial, options.rank_tol) == chosen.size() + 1) {
      chosen.push_back(idx);
    } else {
      stacked.resize(before);
      ++result.diagnostics.discarded_candidates;
    }
    result.diagnostics.rank_progression.push_back(chosen.size());
  }
  result.diagnostics.solves = candidates.solves;
  result.diagnostics.failed_solves = candidates.failed_solves;
  if (chosen.size() < n) {
    throw RecoveryFailed("greedy reached rank " + std::to_string(chosen.size()) + " of " +
                             std::to_string(n),
                         chosen.size());
  }

  Matrix x_hat(n, p);
  for (std::size_t i = 0; i < n; ++i) {
    std::ranges::copy(candidates.rows[chosen[i]], x_hat.row(i).begin());
    result.row_sources.push_back(candidates.pair_index.empty() ? chosen[i]
                                                               : candidates.pair_index[chosen[i]]);
  }
  // A = Y Y^T (X Y^T)^{-1}, computed as A^T = (X Y^T)^{-T} (Y Y^T)^T.
  const Matrix yt = y.transpose();
  const Matrix gram = matmul(y, yt);
  const Matrix cross = matmul(x_hat, yt);
  result.a_hat = solve(cross.transpose(), gram.transpose()).transpose();
  result.x_hat = std::move(x_hat);
  result.status = RecoveryStatus::Success;
  return result;
}

RecoveryResult recover_square(const Matrix& y, const Seed& seed, const RecoveryOptions& options) {
  const CandidateSet candidates = erspud(y, seed, options);
  return greedy(candidates, y.rows(), y, options);
}

namespace {

double abs_cosine(std::span<const double> a, std::span<const double> b) {
  const double na = norm2(a);
  const double nb = norm2(b);
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::abs(dot(a, b)) / (na * nb);
}

}  // namespace

RecoveryResult recover_rectangular(const Matrix& y, std::size_t m, const SparseModel& model,
                                   const Seed& seed, const RecoveryOptions& options) {
  const std::size_t n = y.rows();
  const std::size_t p = y.cols();
  if (m == 0 || m > n) throw InvalidArgument("recover_rectangular: need 1 <= m <= n");
  if (m == n) return recover_square(y, seed, options);

  const std::size_t extra = n - m;
  SparseModel z_model = model;
  z_model.m = extra;
  z_model.p = p;
  z_model.seed = seed.child(1);
  const Matrix z = gen_sparse(z_model);
  const Matrix b = options.augmentation_law == Law::Rademacher
                       ? gen_dense_rademacher(n, extra, seed.child(2))
                       : gen_dense_gaussian(n, extra, seed.child(2));
  const Matrix y_aug = y + matmul(b, z);

  RecoveryResult square = recover_square(y_aug, seed.child(3), options);

  // Match every Z row to its best still-unclaimed recovered row, strongest
  // matches first.
  struct Match {
    double cosine;
    std::size_t z_row;
    std::size_t x_row;
  };
  std::vector<Match> matches;
  for (std::size_t k = 0; k < extra; ++k)
    for (std::size_t i = 0; i < n; ++i)
      matches.push_back({abs_cosine(z.row(k), square.x_hat.row(i)), k, i});
  std::ranges::stable_sort(matches, [](const Match& a, const Match& b) { return a.cosine > b.cosine; });
  std::vector<char> z_used(extra, 0);
  std::vector<char> x_used(n, 0);
  std::size_t matched = 0;
  for (const Match& mt : matches) {
    if (mt.cosine < 1.0 - options.augmentation_match_tol) break;
    if (z_used[mt.z_row] || x_used[mt.x_row]) continue;
    z_used[mt.z_row] = 1;
    x_used[mt.x_row] = 1;
    ++matched;
  }
  if (matched < extra) {
    throw RecoveryFailed("rectangular recovery identified " + std::to_string(matched) + " of " +
                             std::to_string(extra) + " augmentation rows",
                         n);
  }

  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < n; ++i)
    if (!x_used[i]) keep.push_back(i);
  RecoveryResult result;
  result.a_hat = select_cols(square.a_hat, keep);
  result.x_hat = select_rows(square.x_hat, keep);
  for (std::size_t i : keep) result.row_sources.push_back(square.row_sources[i]);
  result.status = RecoveryStatus::Success;
  result.diagnostics = std::move(square.diagnostics);
  result.diagnostics.notes.push_back("stripped " + std::to_string(extra) + " augmentation rows");
  return result;
}

GroupPartition partition_collinear(const Matrix& y, double collinear_tol) {
  if (!(collinear_tol >= 0.0 && collinear_tol < 1.0))
    throw InvalidArgument("collinear_tol must lie in [0, 1)");
  const std::size_t n = y.rows();
  const std::size_t p = y.cols();

  std::vector<std::vector<double>> unit(p);
  std::vector<double> norms(p);
  double max_norm = 0.0;
  for (std::size_t c = 0; c < p; ++c) {
    unit[c] = y.col(c);
    norms[c] = norm2(unit[c]);
    max_norm = std::max(max_norm, norms[c]);
  }

  // Sign-invariant sort key |<u, h>| for a fixed unit vector h: collinear
  // columns have keys within sqrt(2 * tol) of each other.
  std::vector<double> h(n);
  Rng rng(Seed(0x636f6c6c696e6561ULL));
  for (double& v : h) v = rng.normal();
  const double hn = norm2(h);
  for (double& v : h) v /= hn;

  GroupPartition part;
  std::vector<std::size_t> zero_cols;
  std::vector<std::size_t> live;
  std::vector<double> key(p, 0.0);
  for (std::size_t c = 0; c < p; ++c) {
    if (norms[c] <= 1e-12 * max_norm || norms[c] == 0.0) {
      zero_cols.push_back(c);
      continue;
    }
    for (double& v : unit[c]) v /= norms[c];
    key[c] = std::abs(dot(unit[c], h));
    live.push_back(c);
  }
  std::ranges::stable_sort(live, [&](std::size_t a, std::size_t b) { return key[a] < key[b]; });

  const double window = 2.0 * std::sqrt(2.0 * collinear_tol) + 1e-12;
  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::size_t> reps;
  for (std::size_t c : live) {
    bool placed = false;
    for (std::size_t g = groups.size(); g-- > 0;) {
      if (key[reps[g]] < key[c] - window) break;
      if (abs_cosine(unit[c], unit[reps[g]]) >= 1.0 - collinear_tol) {
        groups[g].push_back(c);
        placed = true;
        break;
      }
    }
    if (!placed) {
      groups.push_back({c});
      reps.push_back(c);
    }
  }
  if (!zero_cols.empty()) groups.push_back(zero_cols);

  for (auto& g : groups) std::ranges::sort(g);
  std::ranges::sort(groups, [](const auto& a, const auto& b) { return a.front() < b.front(); });
  part.groups = std::move(groups);
  part.zero_group = part.groups.size();
  for (std::size_t g = 0; g < part.groups.size(); ++g) {
    part.representatives.push_back(part.groups[g].front());
    if (!zero_cols.empty() && part.groups[g].front() == zero_cols.front()) part.zero_group = g;
  }
  return part;
}

RecoveryResult recover_verysparse(const Matrix& y, const RecoveryOptions& options) {
  const std::size_t n = y.rows();
  const GroupPartition part = partition_collinear(y, options.collinear_tol);

  RecoveryResult result;
  std::vector<std::size_t> chosen_groups;
  for (std::size_t g = 0; g < part.groups.size(); ++g) {
    if (g == part.zero_group) continue;
    if (part.groups[g].size() > 2) chosen_groups.push_back(g);
  }
  result.diagnostics.groups = part.groups.size();
  result.diagnostics.well_represented = chosen_groups.size();

  Matrix a_hat(n, chosen_groups.size());
  for (std::size_t j = 0; j < chosen_groups.size(); ++j) {
    const std::size_t g = chosen_groups[j];
    const auto col = y.col(part.representatives[g]);
    const double nrm = norm2(col);
    for (std::size_t k = 0; k < n; ++k) a_hat(k, j) = col[k] / nrm;
    result.row_sources.push_back(g);
  }
  result.a_hat = std::move(a_hat);

  if (chosen_groups.size() != n) {
    result.status = chosen_groups.size() < n ? RecoveryStatus::TooFewColumns
                                             : RecoveryStatus::TooManyColumns;
    result.diagnostics.notes.push_back(std::to_string(chosen_groups.size()) +
                                       " well-represented groups for n = " + std::to_string(n));
    return result;
  }
  result.x_hat = solve(result.a_hat, y);
  result.status = RecoveryStatus::Success;
  result.diagnostics.notes.push_back("x_hat completed by linear solve against a_hat");
  return result;
}

}  // namespace spud
