#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spud/evaluation.hpp"
#include "spud/matrix.hpp"
#include "spud/random.hpp"
#include "spud/recovery.hpp"

namespace spud::harness {

/// Rule mapping n to the number of samples p.
struct PRule {
  enum class Kind { Fixed, NLogN, N2Log2N };
  Kind kind = Kind::NLogN;
  double c = 5.0;
  std::size_t fixed = 0;

  /// fixed: p; nlogn: ceil(c n ln n); n2log2n: ceil(c n^2 ln^2 n).
  std::size_t operator()(std::size_t n) const;
  std::string describe() const;
};

/// Accepts "300", "nlogn", "nlogn:5", "n2log2n", "n2log2n:5".
PRule parse_p_rule(std::string_view text);

/// Dictionary width for rectangular runs: an absolute m or "n-K".
struct MRule {
  std::size_t absolute = 0;
  std::size_t deficit = 0;
  bool relative = false;

  std::size_t operator()(std::size_t n) const;
};
MRule parse_m_rule(std::string_view text);

enum class Algorithm { ErSpud, VerySparse, Rectangular };
Algorithm parse_algorithm(std::string_view name);
std::string_view algorithm_name(Algorithm algorithm);

/// Comma-separated values, or an inclusive "start:stop:step" range.
std::vector<double> parse_real_list(std::string_view text);
std::vector<std::size_t> parse_count_list(std::string_view text);

enum class SparsityAxis { Theta, K };

struct SweepConfig {
  std::vector<std::size_t> n_values;
  PRule p_rule;
  SparsityAxis axis = SparsityAxis::Theta;
  std::vector<double> sparsity_values;
  Law law = Law::Gaussian;
  std::size_t trials = 1;
  Algorithm algorithm = Algorithm::ErSpud;
  MRule m_rule{0, 3, true};
  std::uint64_t root_seed = 0;
  std::string out_path;
  double success_threshold = 1e-3;
  RecoveryOptions options;
  std::size_t jobs = 1;
  /// Wall-clock timings break byte-identical reruns, so they are opt-in.
  bool record_runtime = false;

  void validate() const;
  std::size_t cell_count() const { return n_values.size() * sparsity_values.size(); }
};

/// A ground-truth instance Y = A X.
struct Instance {
  Matrix a;
  Matrix x;
  Matrix y;
};

struct InstanceSpec {
  std::size_t n = 10;
  std::size_t m = 10;  ///< dictionary columns (m == n: square)
  std::size_t p = 100;
  Sparsity sparsity = ExactKSparsity{2};
  Law law = Law::Rademacher;
};

/// A: n x m standard Gaussian (seed path 0); X: m x p from the sparse model
/// (seed path 1); Y = A X.
Instance generate_instance(const InstanceSpec& spec, const Seed& seed);

struct CellRecord {
  std::size_t n = 0;
  std::size_t p = 0;
  double sparsity = 0.0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  Algorithm algorithm = Algorithm::ErSpud;
  double rel_error = 1.0;
  bool success = false;
  std::optional<double> runtime_ms;
  std::string status;
};

inline constexpr std::string_view kCsvHeader =
    "n,p,sparsity,trial,seed,algorithm,rel_error,success,runtime_ms,status";

std::string format_record(const CellRecord& record);

/// Per-trial seed: derive(root, cell, trial).
std::uint64_t derive_trial_seed(std::uint64_t root, std::size_t cell, std::size_t trial);

/// Runs one algorithm on one generated instance. Algorithm failures are
/// reported through `status`; rel_error is 1 when nothing was recovered.
CellRecord run_trial(const SweepConfig& config, std::size_t n, double sparsity,
                     std::size_t trial, std::uint64_t seed);

/// Executes every (cell, trial) and streams CSV rows in deterministic order,
/// flushing after each row. Writes to config.out_path unless `out` is given.
std::vector<CellRecord> run_sweep(const SweepConfig& config, std::ostream* out = nullptr);

/// relative_error against `a`, treating missing recovered columns as zero.
double padded_relative_error(const Matrix& a_hat, const Matrix& a);

}  // namespace spud::harness
