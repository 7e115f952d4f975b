#include "spud/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "spud/errors.hpp"
#include "spud/parallel.hpp"

namespace spud::concentration {

void ConcentrationConfig::validate() const {
  if (n == 0 || p == 0) throw InvalidArgument("concentration: n and p must be positive");
  const double min_theta = 1.0 / static_cast<double>(n);
  if (!(theta >= min_theta - 1e-15 && theta <= 1.0))
    throw InvalidArgument("concentration: theta must lie in [1/n, 1]");
  if (directions == 0) throw InvalidArgument("concentration: need at least one direction");
  if (!(c > 0.0)) throw InvalidArgument("concentration: c must be positive");
}

void NetSpec::validate() const {
  if (n == 0) throw InvalidArgument("net: n must be positive");
  if (!(alpha <= 1.0 && alpha >= 2.0 / static_cast<double>(n) - 1e-15))
    throw InvalidArgument("net: alpha must lie in [2/n, 1]");
}

MuBounds mu_bounds(std::size_t n, std::size_t p, double theta) {
  const double pd = static_cast<double>(p);
  return {pd * std::sqrt(theta / static_cast<double>(n)), pd * theta};
}

namespace {

struct Atom {
  double value;
  double prob;
};

/// All 3^k signed partial sums over coords with their probabilities.
std::vector<Atom> enumerate_half(std::span<const double> coords, double theta) {
  std::vector<Atom> atoms{{0.0, 1.0}};
  for (double c : coords) {
    std::vector<Atom> next;
    next.reserve(atoms.size() * 3);
    for (const Atom& a : atoms) {
      next.push_back({a.value, a.prob * (1.0 - theta)});
      next.push_back({a.value + c, a.prob * theta * 0.5});
      next.push_back({a.value - c, a.prob * theta * 0.5});
    }
    atoms = std::move(next);
  }
  return atoms;
}

double rademacher_abs_mean(std::span<const double> v, double theta) {
  const std::size_t half = v.size() / 2;
  const std::vector<Atom> left = enumerate_half(v.first(half), theta);
  std::vector<Atom> right = enumerate_half(v.subspan(half), theta);
  std::ranges::sort(right, {}, &Atom::value);

  // Prefix sums of q and q*b over the sorted right half.
  std::vector<double> cum_q(right.size() + 1, 0.0), cum_qb(right.size() + 1, 0.0);
  for (std::size_t i = 0; i < right.size(); ++i) {
    cum_q[i + 1] = cum_q[i] + right[i].prob;
    cum_qb[i + 1] = cum_qb[i] + right[i].prob * right[i].value;
  }
  const double total_q = cum_q.back();
  const double total_qb = cum_qb.back();

  // E|a + b| = sum_{b >= -a} q (a + b) - sum_{b < -a} q (a + b).
  double expectation = 0.0;
  for (const Atom& a : left) {
    const auto split = static_cast<std::size_t>(
        std::ranges::lower_bound(right, -a.value, {}, &Atom::value) - right.begin());
    const double q_lt = cum_q[split];
    const double qb_lt = cum_qb[split];
    const double inner = a.value * (total_q - 2.0 * q_lt) + (total_qb - 2.0 * qb_lt);
    expectation += a.prob * inner;
  }
  return expectation;
}

double gaussian_abs_mean(std::span<const double> v, double theta) {
  const std::size_t n = v.size();
  const double scale = std::sqrt(2.0 / std::numbers::pi);
  double expectation = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    double prob = 1.0;
    double sq = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (mask & (std::uint64_t{1} << j)) {
        prob *= theta;
        sq += v[j] * v[j];
      } else {
        prob *= 1.0 - theta;
      }
    }
    expectation += prob * scale * std::sqrt(sq);
  }
  return expectation;
}

double column_abs_dot(const Matrix& x, std::size_t col, std::span<const double> v) {
  double s = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) s += x(k, col) * v[k];
  return std::abs(s);
}

void normalize_l1(std::vector<double>& v) {
  const double s = norm1(v);
  if (s > 0.0)
    for (double& e : v) e /= s;
}

}  // namespace

double mu_exact(std::span<const double> v, double theta, Law law, std::size_t p) {
  if (v.size() > kMaxExactDimension) {
    throw UnsupportedSize("mu_exact enumerates at most n = " +
                          std::to_string(kMaxExactDimension) + " coordinates, got " +
                          std::to_string(v.size()) + "; use mu_estimate");
  }
  if (!(theta >= 0.0 && theta <= 1.0)) throw InvalidArgument("mu_exact: theta outside [0, 1]");
  const double per_column =
      law == Law::Rademacher ? rademacher_abs_mean(v, theta) : gaussian_abs_mean(v, theta);
  return static_cast<double>(p) * per_column;
}

Estimate mu_estimate(std::span<const double> v, double theta, Law law, std::size_t p,
                     std::size_t samples, const Seed& seed) {
  if (samples < 100) throw InvalidArgument("mu_estimate: need at least 100 samples");
  Rng rng(seed);
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    double acc = 0.0;
    for (double vj : v)
      if (rng.bernoulli(theta)) acc += draw(rng, law) * vj;
    const double z = std::abs(acc);
    // Welford update.
    const double delta = z - mean;
    mean += delta / static_cast<double>(s + 1);
    m2 += delta * (z - mean);
  }
  const double var = m2 / static_cast<double>(samples - 1);
  const double pd = static_cast<double>(p);
  return {pd * mean, pd * std::sqrt(var / static_cast<double>(samples))};
}

std::string_view direction_kind_name(DirectionKind kind) {
  switch (kind) {
    case DirectionKind::NullSpace:
      return "null_space";
    case DirectionKind::Coordinate:
      return "coordinate";
    case DirectionKind::Uniform:
      return "uniform";
    case DirectionKind::SparseSigned:
      return "sparse_signed";
    case DirectionKind::Dense:
      return "dense";
  }
  return "unknown";
}

std::vector<std::pair<DirectionKind, std::vector<double>>> sample_directions(
    const Matrix& x, std::size_t count, const Seed& seed) {
  const std::size_t n = x.rows();
  std::vector<std::pair<DirectionKind, std::vector<double>>> out;
  auto full = [&] { return out.size() >= count; };

  if (x.cols() < n && !full()) {
    std::vector<double> v = null_vector(x.transpose());
    if (!v.empty()) {
      normalize_l1(v);
      out.emplace_back(DirectionKind::NullSpace, std::move(v));
    }
  }
  for (std::size_t i = 0; i < n && !full(); ++i) {
    std::vector<double> v(n, 0.0);
    v[i] = 1.0;
    out.emplace_back(DirectionKind::Coordinate, std::move(v));
  }
  if (!full()) out.emplace_back(DirectionKind::Uniform, std::vector<double>(n, 1.0 / static_cast<double>(n)));

  Rng rng(seed);
  std::vector<std::size_t> idx(n);
  bool sparse_turn = true;
  while (!full()) {
    std::vector<double> v(n, 0.0);
    if (sparse_turn && n >= 2) {
      const std::size_t support = 2 + static_cast<std::size_t>(rng.below(n - 1));
      std::iota(idx.begin(), idx.end(), std::size_t{0});
      for (std::size_t i = 0; i < support; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.below(n - i));
        std::swap(idx[i], idx[j]);
        v[idx[i]] = (1.0 - rng.uniform()) * rng.rademacher();
      }
      normalize_l1(v);
      out.emplace_back(DirectionKind::SparseSigned, std::move(v));
    } else {
      for (double& e : v) e = -std::log(1.0 - rng.uniform()) * rng.rademacher();
      normalize_l1(v);
      out.emplace_back(DirectionKind::Dense, std::move(v));
    }
    sparse_turn = !sparse_turn;
  }
  return out;
}

DeviationReport deviation_sup(const ConcentrationConfig& config) {
  config.validate();
  SparseModel model;
  model.m = config.n;
  model.p = config.p;
  model.sparsity = BernoulliSparsity{config.theta};
  model.law = config.law;
  model.seed = config.seed.child(0);
  const Matrix x = gen_sparse(model);

  auto directions = sample_directions(x, config.directions, config.seed.child(1));
  DeviationReport report;
  report.records.resize(directions.size());
  const bool exact = config.n <= kMaxExactDimension;
  parallel_for(directions.size(), config.jobs, [&](std::size_t d) {
    DirectionRecord rec;
    rec.kind = directions[d].first;
    rec.v = std::move(directions[d].second);
    for (std::size_t col = 0; col < x.cols(); ++col) rec.norm1 += column_abs_dot(x, col, rec.v);
    if (exact) {
      rec.mu = mu_exact(rec.v, config.theta, config.law, config.p);
    } else {
      rec.mu = mu_estimate(rec.v, config.theta, config.law, config.p, 20000,
                           config.seed.child({2, static_cast<std::uint32_t>(d)}))
                   .mean;
      rec.mu_is_exact = false;
    }
    rec.rel_dev = rec.mu > 0.0 ? std::abs(rec.norm1 - rec.mu) / rec.mu : 0.0;
    report.records[d] = std::move(rec);
  });
  for (const auto& rec : report.records) {
    report.max_rel_dev = std::max(report.max_rel_dev, rec.rel_dev);
    if (rec.rel_dev >= config.c) ++report.bad_directions;
  }
  return report;
}

double net_size(const NetSpec& spec) {
  spec.validate();
  const auto budget = static_cast<std::size_t>(std::floor(1.0 / spec.alpha + 1e-9));
  // s nonzero coordinates: positions C(n, s), signs 2^s, and positive integer
  // magnitudes with sum <= budget: C(budget, s).
  auto choose = [](double a, double b) {
    if (b < 0 || b > a) return 0.0;
    return std::exp(std::lgamma(a + 1) - std::lgamma(b + 1) - std::lgamma(a - b + 1));
  };
  double total = 0.0;
  for (std::size_t s = 0; s <= std::min(spec.n, budget); ++s) {
    const auto sd = static_cast<double>(s);
    total += choose(static_cast<double>(spec.n), sd) * std::pow(2.0, sd) *
             choose(static_cast<double>(budget), sd);
  }
  return std::round(total);
}

std::vector<std::vector<double>> build_linf_net(const NetSpec& spec) {
  const double predicted = net_size(spec);
  if (predicted > kMaxNetPoints) {
    throw UnsupportedSize("alpha-net would hold about " + std::to_string(predicted) +
                          " points (limit " + std::to_string(kMaxNetPoints) + ")");
  }
  const auto budget = static_cast<long>(std::floor(1.0 / spec.alpha + 1e-9));
  std::vector<std::vector<double>> net;
  net.reserve(static_cast<std::size_t>(predicted));
  std::vector<long> coeff(spec.n, 0);

  // Depth-first over coordinates, tracking the remaining l1 budget.
  auto recurse = [&](auto&& self, std::size_t pos, long remaining) -> void {
    if (pos == spec.n) {
      std::vector<double> v(spec.n);
      for (std::size_t j = 0; j < spec.n; ++j) v[j] = static_cast<double>(coeff[j]) * spec.alpha;
      net.push_back(std::move(v));
      return;
    }
    for (long c = -remaining; c <= remaining; ++c) {
      coeff[pos] = c;
      self(self, pos + 1, remaining - std::abs(c));
    }
    coeff[pos] = 0;
  };
  recurse(recurse, 0, budget);
  return net;
}

double bernstein_bound(double variance, double tau, double t) {
  if (!(variance > 0.0) || !(tau > 0.0) || !(t > 0.0))
    throw InvalidArgument("bernstein_bound: variance, tau and T must be positive");
  return std::exp(-std::min(t * t / (4.0 * variance), t / (4.0 * tau)));
}

}  // namespace spud::concentration
