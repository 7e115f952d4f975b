#include "spud/random.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "spud/errors.hpp"

namespace spud {

std::uint64_t mix64(std::uint64_t x) noexcept {
  // SplitMix64 finalizer.
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Seed Seed::child(std::uint32_t index) const {
  Seed s = *this;
  s.path.push_back(index);
  return s;
}

Seed Seed::child(std::initializer_list<std::uint32_t> indices) const {
  Seed s = *this;
  s.path.insert(s.path.end(), indices.begin(), indices.end());
  return s;
}

std::uint64_t Seed::key() const noexcept {
  std::uint64_t k = mix64(root);
  for (std::uint32_t p : path) k = mix64(k ^ mix64(0x632be59bd9b4e019ULL + p));
  return k;
}

Rng::result_type Rng::operator()() noexcept {
  return mix64(key_ ^ mix64(counter_++));
}

double Rng::uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

std::uint64_t Rng::below(std::uint64_t n) noexcept {
  // Lemire's multiply-shift with rejection of the biased low region.
  std::uint64_t x = (*this)();
  __uint128_t prod = static_cast<__uint128_t>(x) * n;
  auto low = static_cast<std::uint64_t>(prod);
  if (low < n) {
    const std::uint64_t threshold = -n % n;
    while (low < threshold) {
      x = (*this)();
      prod = static_cast<__uint128_t>(x) * n;
      low = static_cast<std::uint64_t>(prod);
    }
  }
  return static_cast<std::uint64_t>(prod >> 64);
}

double Rng::normal() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_normal_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

Law parse_law(std::string_view name) {
  if (name == "rademacher") return Law::Rademacher;
  if (name == "gaussian") return Law::Gaussian;
  throw InvalidArgument("unknown law '" + std::string(name) + "' (expected rademacher|gaussian)");
}

std::string_view law_name(Law law) {
  return law == Law::Rademacher ? "rademacher" : "gaussian";
}

double expected_abs(Law law) {
  return law == Law::Rademacher ? 1.0 : std::sqrt(2.0 / std::numbers::pi);
}

double draw(Rng& rng, Law law) {
  return law == Law::Rademacher ? rng.rademacher() : rng.normal();
}

void SparseModel::validate() const {
  if (m == 0 || p == 0) throw InvalidArgument("sparse model needs m >= 1 and p >= 1");
  if (const auto* b = std::get_if<BernoulliSparsity>(&sparsity)) {
    if (!(b->theta >= 0.0 && b->theta <= 1.0))
      throw InvalidArgument("theta must lie in [0, 1], got " + std::to_string(b->theta));
  } else {
    const auto k = std::get<ExactKSparsity>(sparsity).k;
    if (k < 1 || k > m)
      throw InvalidArgument("k must lie in [1, m], got " + std::to_string(k));
  }
}

double SparseModel::fill() const {
  if (const auto* b = std::get_if<BernoulliSparsity>(&sparsity)) return b->theta;
  return static_cast<double>(std::get<ExactKSparsity>(sparsity).k) / static_cast<double>(m);
}

Matrix gen_sparse(const SparseModel& model) {
  model.validate();
  Rng rng(model.seed);
  Matrix x(model.m, model.p);
  if (const auto* b = std::get_if<BernoulliSparsity>(&model.sparsity)) {
    for (double& v : x.data()) {
      if (rng.bernoulli(b->theta)) v = draw(rng, model.law);
    }
    return x;
  }
  const std::size_t k = std::get<ExactKSparsity>(model.sparsity).k;
  std::vector<std::size_t> rows(model.m);
  for (std::size_t c = 0; c < model.p; ++c) {
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    // Partial Fisher-Yates: the first k slots are a uniform k-subset.
    for (std::size_t i = 0; i < k; ++i) {
      const auto j = i + static_cast<std::size_t>(rng.below(model.m - i));
      std::swap(rows[i], rows[j]);
      x(rows[i], c) = draw(rng, model.law);
    }
  }
  return x;
}

Matrix gen_dense_gaussian(std::size_t rows, std::size_t cols, const Seed& seed) {
  if (rows == 0 || cols == 0) throw InvalidArgument("gen_dense_gaussian: empty shape");
  Rng rng(seed);
  Matrix m(rows, cols);
  for (double& v : m.data()) v = rng.normal();
  return m;
}

Matrix gen_dense_rademacher(std::size_t rows, std::size_t cols, const Seed& seed) {
  if (rows == 0 || cols == 0) throw InvalidArgument("gen_dense_rademacher: empty shape");
  Rng rng(seed);
  Matrix m(rows, cols);
  for (double& v : m.data()) v = rng.rademacher();
  return m;
}

Matrix truncate(const Matrix& m, double tau) {
  if (!(tau >= 0.0)) throw InvalidArgument("truncate: tau must be nonnegative");
  Matrix out = m;
  for (double& v : out.data())
    if (std::abs(v) > tau) v = 0.0;
  return out;
}

}  // namespace spud
