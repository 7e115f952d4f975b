#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "spud/random.hpp"

namespace spud::concentration {

/// Largest n for which mu_exact enumerates the coefficient law.
inline constexpr std::size_t kMaxExactDimension = 20;
/// Largest net build_linf_net will materialize.
inline constexpr double kMaxNetPoints = 1e7;

struct ConcentrationConfig {
  std::size_t n = 8;
  std::size_t p = 1000;
  double theta = 0.5;
  Law law = Law::Rademacher;
  /// Deviation constant c in |‖X^T v‖_1 - mu_v| >= c mu_v.
  double c = 0.1;
  std::size_t directions = 64;
  Seed seed;
  std::size_t jobs = 1;

  void validate() const;
};

struct NetSpec {
  std::size_t n = 0;
  double alpha = 1.0;

  void validate() const;
};

/// mu_min = p sqrt(theta / n) and mu_max = p theta.
struct MuBounds {
  double min;
  double max;
};
MuBounds mu_bounds(std::size_t n, std::size_t p, double theta);

/// Exact mu_v = E ||X^T v||_1 = p E|X_1 v| under the Bernoulli(theta) model.
/// Rademacher values: enumeration of all 3^n (chi, xi) patterns, organized
/// as a meet-in-the-middle over two halves of v. Gaussian values: sum over
/// the 2^n supports of sqrt(2/pi) * ||v_S||_2. Throws UnsupportedSize for
/// n > kMaxExactDimension.
double mu_exact(std::span<const double> v, double theta, Law law, std::size_t p);

struct Estimate {
  double mean;
  double std_error;
};

/// Monte-Carlo estimate of mu_v from `samples` independent columns.
Estimate mu_estimate(std::span<const double> v, double theta, Law law, std::size_t p,
                     std::size_t samples, const Seed& seed);

enum class DirectionKind { NullSpace, Coordinate, Uniform, SparseSigned, Dense };
std::string_view direction_kind_name(DirectionKind kind);

struct DirectionRecord {
  DirectionKind kind;
  std::vector<double> v;  ///< unit l1 norm
  double norm1 = 0.0;     ///< ||X^T v||_1
  double mu = 0.0;
  bool mu_is_exact = true;
  double rel_dev = 0.0;  ///< |norm1 - mu| / mu
};

struct DeviationReport {
  /// Sampled sup of the relative deviation: a lower bound on the true sup.
  double max_rel_dev = 0.0;
  /// Number of sampled directions with rel_dev >= c.
  std::size_t bad_directions = 0;
  std::vector<DirectionRecord> records;
};

/// Draws one X and evaluates the relative deviation of ||X^T v||_1 from its
/// mean over a fixed mixture of directions: a null-space witness when p < n,
/// the coordinate vectors, the all-ones/n vector, then alternating random
/// signed sparse and dense vectors.
DeviationReport deviation_sup(const ConcentrationConfig& config);

/// The same direction sequence deviation_sup uses, without evaluating it.
std::vector<std::pair<DirectionKind, std::vector<double>>> sample_directions(
    const Matrix& x, std::size_t count, const Seed& seed);

/// Predicted number of points in the alpha-net of the closed l1 ball.
double net_size(const NetSpec& spec);

/// Every vector with coordinates in alpha*Z and ||v||_1 <= 1. Each point of
/// the l1 ball lies within alpha (l_inf) of one of them.
std::vector<std::vector<double>> build_linf_net(const NetSpec& spec);

/// exp(-min{T^2 / (4 var), T / (4 tau)}).
double bernstein_bound(double variance, double tau, double t);

}  // namespace spud::concentration
