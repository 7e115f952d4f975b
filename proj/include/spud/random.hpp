#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "spud/matrix.hpp"

namespace spud {

/// A root seed plus a derivation path. Equal (root, path) pairs always
/// produce the same stream; sibling paths give independent streams.
struct Seed {
  std::uint64_t root = 0;
  std::vector<std::uint32_t> path;

  Seed() = default;
  explicit Seed(std::uint64_t r) : root(r) {}
  Seed(std::uint64_t r, std::vector<std::uint32_t> p) : root(r), path(std::move(p)) {}

  Seed child(std::uint32_t index) const;
  Seed child(std::initializer_list<std::uint32_t> indices) const;
  /// 64-bit stream key folded from root and path.
  std::uint64_t key() const noexcept;

  friend bool operator==(const Seed&, const Seed&) = default;
};

std::uint64_t mix64(std::uint64_t x) noexcept;

/// Counter-based generator: output i is a bijective mix of (key, i).
/// Distributions are implemented here rather than through <random> so that
/// streams are bit-identical across standard library implementations.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(const Seed& seed) : key_(seed.key()) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() noexcept;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform integer in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n) noexcept;
  double normal() noexcept;
  double rademacher() noexcept { return ((*this)() >> 63) ? 1.0 : -1.0; }
  bool bernoulli(double prob) noexcept { return uniform() < prob; }

  template <typename T>
  void shuffle(std::span<T> items) noexcept {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

enum class Law { Rademacher, Gaussian };

Law parse_law(std::string_view name);
std::string_view law_name(Law law);
/// E|xi| for the law: 1 for Rademacher, sqrt(2/pi) for the standard normal.
double expected_abs(Law law);
double draw(Rng& rng, Law law);

struct BernoulliSparsity {
  double theta;
};
struct ExactKSparsity {
  std::size_t k;
};
using Sparsity = std::variant<BernoulliSparsity, ExactKSparsity>;

/// Parameters of the Bernoulli-subgaussian coefficient model x_ij = chi_ij xi_ij.
struct SparseModel {
  std::size_t m = 0;
  std::size_t p = 0;
  Sparsity sparsity = BernoulliSparsity{0.1};
  Law law = Law::Gaussian;
  Seed seed;

  void validate() const;
  /// Expected fraction of nonzero entries (theta, or k/m).
  double fill() const;
};

Matrix gen_sparse(const SparseModel& model);
Matrix gen_dense_gaussian(std::size_t rows, std::size_t cols, const Seed& seed);
Matrix gen_dense_rademacher(std::size_t rows, std::size_t cols, const Seed& seed);

/// Keeps entries with |value| <= tau and zeroes the rest.
Matrix truncate(const Matrix& m, double tau);

}  // namespace spud
