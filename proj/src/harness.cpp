#include "spud/harness.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>

#include "spud/errors.hpp"
#include "spud/matrix_io.hpp"
#include "spud/parallel.hpp"

namespace spud::harness {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

double to_real(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || !std::isfinite(v))
    throw InvalidArgument("not a number: '" + std::string(s) + "'");
  return v;
}

std::size_t to_count(std::string_view s) {
  s = trim(s);
  std::size_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw InvalidArgument("not a non-negative integer: '" + std::string(s) + "'");
  return v;
}

}  // namespace

std::size_t PRule::operator()(std::size_t n) const {
  const double nd = static_cast<double>(n);
  const double ln = std::log(nd);
  switch (kind) {
    case Kind::Fixed:
      return fixed;
    case Kind::NLogN:
      return static_cast<std::size_t>(std::ceil(c * nd * ln - 1e-9));
    case Kind::N2Log2N:
      return static_cast<std::size_t>(std::ceil(c * nd * nd * ln * ln - 1e-9));
  }
  return fixed;
}

std::string PRule::describe() const {
  switch (kind) {
    case Kind::Fixed:
      return std::to_string(fixed);
    case Kind::NLogN:
      return "nlogn:" + format_double(c);
    case Kind::N2Log2N:
      return "n2log2n:" + format_double(c);
  }
  return {};
}

PRule parse_p_rule(std::string_view text) {
  text = trim(text);
  PRule rule;
  auto with_constant = [&](std::string_view prefix, PRule::Kind kind) {
    rule.kind = kind;
    const auto rest = text.substr(prefix.size());
    if (rest.empty()) return;
    if (rest.front() != ':') throw InvalidArgument("bad p rule '" + std::string(text) + "'");
    rule.c = to_real(rest.substr(1));
    if (!(rule.c > 0.0)) throw InvalidArgument("p rule constant must be positive");
  };
  if (text.starts_with("n2log2n")) {
    with_constant("n2log2n", PRule::Kind::N2Log2N);
  } else if (text.starts_with("nlogn")) {
    with_constant("nlogn", PRule::Kind::NLogN);
  } else {
    rule.kind = PRule::Kind::Fixed;
    rule.fixed = to_count(text);
    if (rule.fixed == 0) throw InvalidArgument("p must be positive");
  }
  return rule;
}

std::size_t MRule::operator()(std::size_t n) const {
  if (!relative) return absolute;
  return n > deficit ? n - deficit : 0;
}

MRule parse_m_rule(std::string_view text) {
  text = trim(text);
  MRule rule;
  if (text.starts_with("n-")) {
    rule.relative = true;
    rule.deficit = to_count(text.substr(2));
  } else if (text == "n") {
    rule.relative = true;
  } else {
    rule.absolute = to_count(text);
  }
  return rule;
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "erspud") return Algorithm::ErSpud;
  if (name == "verysparse") return Algorithm::VerySparse;
  if (name == "rectangular") return Algorithm::Rectangular;
  throw InvalidArgument("unknown algorithm '" + std::string(name) +
                        "' (expected erspud|verysparse|rectangular)");
}

std::string_view algorithm_name(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::ErSpud:
      return "erspud";
    case Algorithm::VerySparse:
      return "verysparse";
    case Algorithm::Rectangular:
      return "rectangular";
  }
  return "unknown";
}

std::vector<double> parse_real_list(std::string_view text) {
  text = trim(text);
  std::vector<double> out;
  if (text.empty()) throw InvalidArgument("empty list");
  if (text.find(':') != std::string_view::npos) {
    const auto a = text.find(':');
    const auto b = text.find(':', a + 1);
    if (b == std::string_view::npos) throw InvalidArgument("range must be start:stop:step");
    const double start = to_real(text.substr(0, a));
    const double stop = to_real(text.substr(a + 1, b - a - 1));
    const double step = to_real(text.substr(b + 1));
    if (!(step > 0.0) || stop < start) throw InvalidArgument("range needs step > 0, stop >= start");
    // Index-based to avoid accumulating step round-off.
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) {
      const double v = start + static_cast<double>(i) * step;
      out.push_back(std::round(v * 1e12) / 1e12);
    }
    return out;
  }
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto item = text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos);
    out.push_back(to_real(item));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::vector<std::size_t> parse_count_list(std::string_view text) {
  std::vector<std::size_t> out;
  for (double v : parse_real_list(text)) {
    if (v < 0.0 || v != std::floor(v)) throw InvalidArgument("expected integers in list");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

void SweepConfig::validate() const {
  if (n_values.empty()) throw InvalidArgument("sweep: empty n range");
  if (sparsity_values.empty()) throw InvalidArgument("sweep: empty sparsity range");
  if (trials == 0) throw InvalidArgument("sweep: trials must be >= 1");
  for (std::size_t n : n_values)
    if (n < 2) throw InvalidArgument("sweep: n must be >= 2");
  for (double s : sparsity_values) {
    if (axis == SparsityAxis::Theta && !(s >= 0.0 && s <= 1.0))
      throw InvalidArgument("sweep: theta values must lie in [0, 1]");
    if (axis == SparsityAxis::K && (s < 1.0 || s != std::floor(s)))
      throw InvalidArgument("sweep: k values must be positive integers");
  }
  if (algorithm == Algorithm::VerySparse && axis == SparsityAxis::K)
    throw InvalidArgument("sweep: the very-sparse algorithm needs a theta axis");
}

Instance generate_instance(const InstanceSpec& spec, const Seed& seed) {
  Instance inst;
  inst.a = gen_dense_gaussian(spec.n, spec.m, seed.child(0));
  SparseModel model;
  model.m = spec.m;
  model.p = spec.p;
  model.sparsity = spec.sparsity;
  model.law = spec.law;
  model.seed = seed.child(1);
  inst.x = gen_sparse(model);
  inst.y = matmul(inst.a, inst.x);
  return inst;
}

std::string format_record(const CellRecord& r) {
  std::ostringstream os;
  os << r.n << ',' << r.p << ',' << format_double(r.sparsity) << ',' << r.trial << ',' << r.seed
     << ',' << algorithm_name(r.algorithm) << ',' << format_double(r.rel_error) << ','
     << (r.success ? 1 : 0) << ',';
  if (r.runtime_ms) os << format_double(std::round(*r.runtime_ms * 1000.0) / 1000.0);
  os << ',' << r.status;
  return os.str();
}

std::uint64_t derive_trial_seed(std::uint64_t root, std::size_t cell, std::size_t trial) {
  return Seed(root).child({static_cast<std::uint32_t>(cell), static_cast<std::uint32_t>(trial)}).key();
}

double padded_relative_error(const Matrix& a_hat, const Matrix& a) {
  if (a_hat.cols() > a.cols()) return 1.0;
  if (a_hat.cols() == a.cols()) return relative_error(a_hat, a).rel_error;
  Matrix padded(a.rows(), a.cols());
  if (a_hat.cols() > 0) {
    if (a_hat.rows() != a.rows()) throw InvalidArgument("padded_relative_error: row mismatch");
    for (std::size_t r = 0; r < a.rows(); ++r)
      for (std::size_t c = 0; c < a_hat.cols(); ++c) padded(r, c) = a_hat(r, c);
  }
  return relative_error(padded, a).rel_error;
}

CellRecord run_trial(const SweepConfig& config, std::size_t n, double sparsity, std::size_t trial,
                     std::uint64_t seed) {
  CellRecord rec;
  rec.n = n;
  rec.p = config.p_rule(n);
  rec.sparsity = sparsity;
  rec.trial = trial;
  rec.seed = seed;
  rec.algorithm = config.algorithm;

  InstanceSpec spec;
  spec.n = n;
  spec.m = config.algorithm == Algorithm::Rectangular ? config.m_rule(n) : n;
  spec.p = rec.p;
  spec.law = config.law;
  if (config.axis == SparsityAxis::K)
    spec.sparsity = ExactKSparsity{static_cast<std::size_t>(sparsity)};
  else
    spec.sparsity = BernoulliSparsity{sparsity};

  const Seed trial_seed(seed);
  RecoveryOptions options = config.options;
  options.jobs = 1;

  const auto start = std::chrono::steady_clock::now();
  try {
    if (spec.m == 0 || spec.m > n) throw InvalidArgument("rectangular m must lie in [1, n]");
    const Instance inst = generate_instance(spec, trial_seed);
    switch (config.algorithm) {
      case Algorithm::ErSpud: {
        const RecoveryResult res = recover_square(inst.y, trial_seed.child(2), options);
        rec.rel_error = relative_error(res.a_hat, inst.a).rel_error;
        rec.status = std::string(status_name(res.status));
        break;
      }
      case Algorithm::VerySparse: {
        const RecoveryResult res = recover_verysparse(inst.y, options);
        rec.rel_error = padded_relative_error(res.a_hat, inst.a);
        rec.status = std::string(status_name(res.status));
        break;
      }
      case Algorithm::Rectangular: {
        SparseModel z_model;
        z_model.sparsity = spec.sparsity;
        z_model.law = spec.law;
        const RecoveryResult res =
            recover_rectangular(inst.y, spec.m, z_model, trial_seed.child(2), options);
        rec.rel_error = relative_error(res.a_hat, inst.a).rel_error;
        rec.status = std::string(status_name(res.status));
        break;
      }
    }
  } catch (const RecoveryFailed&) {
    rec.status = "recovery_failed";
  } catch (const SingularMatrix&) {
    rec.status = "singular";
  } catch (const std::exception&) {
    rec.status = "error";
  }
  const auto stop = std::chrono::steady_clock::now();
  if (config.record_runtime)
    rec.runtime_ms = std::chrono::duration<double, std::milli>(stop - start).count();
  rec.success = rec.status == "success" && rec.rel_error < config.success_threshold;
  return rec;
}

std::vector<CellRecord> run_sweep(const SweepConfig& config, std::ostream* out) {
  config.validate();
  std::ofstream file;
  if (out == nullptr) {
    file.open(config.out_path, std::ios::out | std::ios::trunc);
    if (!file) throw InvalidArgument("cannot open '" + config.out_path + "' for writing");
    out = &file;
  }
  *out << kCsvHeader << '\n';
  out->flush();

  const std::size_t sparsity_count = config.sparsity_values.size();
  const std::size_t tasks = config.cell_count() * config.trials;
  std::vector<std::optional<CellRecord>> results(tasks);
  std::size_t next_to_write = 0;
  std::mutex write_mutex;

  parallel_for(tasks, config.jobs, [&](std::size_t task) {
    const std::size_t cell = task / config.trials;
    const std::size_t trial = task % config.trials;
    const std::size_t n = config.n_values[cell / sparsity_count];
    const double sparsity = config.sparsity_values[cell % sparsity_count];
    CellRecord rec = run_trial(config, n, sparsity, trial,
                               derive_trial_seed(config.root_seed, cell, trial));
    std::lock_guard lock(write_mutex);
    results[task] = std::move(rec);
    // Emit the contiguous completed prefix so rows stay in (cell, trial) order.
    while (next_to_write < tasks && results[next_to_write]) {
      *out << format_record(*results[next_to_write]) << '\n';
      ++next_to_write;
    }
    out->flush();
  });

  std::vector<CellRecord> records;
  records.reserve(tasks);
  for (auto& r : results) records.push_back(std::move(*r));
  return records;
}

}  // namespace spud::harness
