// Statistical and oracle acceptance checks.
//
//   spud_acceptance            run every criterion
//   spud_acceptance NAME...    run the named criteria
//   spud_acceptance --list     print the criterion names
//
// Prints one PASS/FAIL line per criterion; exits 1 if any criterion fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "oracles.hpp"
#include "spud/concentration.hpp"
#include "spud/evaluation.hpp"
#include "spud/harness.hpp"
#include "spud/l1_solver.hpp"
#include "spud/matrix_io.hpp"

namespace {

using spud::Matrix;
using spud::Seed;
namespace h = spud::harness;
namespace c = spud::concentration;

struct Outcome {
  bool pass;
  std::string detail;
};

struct Criterion {
  std::string name;
  std::function<Outcome()> run;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::vector<h::CellRecord> sweep_cell(std::size_t n, h::SparsityAxis axis, double sparsity,
                                      spud::Law law, h::Algorithm algo, std::uint64_t root,
                                      double threshold, std::size_t m = 0) {
  h::SweepConfig cfg;
  cfg.n_values = {n};
  cfg.p_rule = h::parse_p_rule("nlogn:5");
  cfg.axis = axis;
  cfg.sparsity_values = {sparsity};
  cfg.law = law;
  cfg.trials = 10;
  cfg.algorithm = algo;
  cfg.m_rule = h::MRule{m, 0, false};
  cfg.root_seed = root;
  cfg.success_threshold = threshold;
  std::ostringstream sink;
  return h::run_sweep(cfg, &sink);
}

double mean_error(const std::vector<h::CellRecord>& recs) {
  double s = 0.0;
  for (const auto& r : recs) s += r.rel_error;
  return s / static_cast<double>(recs.size());
}

std::size_t successes(const std::vector<h::CellRecord>& recs) {
  return static_cast<std::size_t>(std::ranges::count_if(recs, [](const auto& r) { return r.success; }));
}

Outcome erspud_success(std::size_t n) {
  const auto recs = sweep_cell(n, h::SparsityAxis::K, 2, spud::Law::Rademacher, h::Algorithm::ErSpud,
                               1000 + n, 1e-3);
  const double mean = mean_error(recs);
  const std::size_t ok = successes(recs);
  return {mean < 1e-2 && ok >= 9, "n=" + std::to_string(n) + " p=" + std::to_string(recs[0].p) +
                                      " k=2 mean_rel_error=" + fmt(mean) + " below_1e-3=" +
                                      std::to_string(ok) + "/10 (need mean<1e-2 and >=9/10)"};
}

Outcome erspud_failure() {
  const auto dense = sweep_cell(10, h::SparsityAxis::K, 10, spud::Law::Rademacher, h::Algorithm::ErSpud,
                                2010, 1e-3);
  const auto sparse = sweep_cell(10, h::SparsityAxis::K, 2, spud::Law::Rademacher, h::Algorithm::ErSpud,
                                 2010, 1e-3);
  const double md = mean_error(dense), ms = mean_error(sparse);
  return {md > 0.1 && md > ms, "n=10 k=10 mean_rel_error=" + fmt(md) + " (k=2: " + fmt(ms) +
                                   ") (need >0.1 and above the k=2 mean)"};
}

Outcome verysparse_success() {
  const auto recs = sweep_cell(100, h::SparsityAxis::Theta, 0.02, spud::Law::Gaussian,
                               h::Algorithm::VerySparse, 3000, 1e-6);
  const std::size_t ok = successes(recs);
  std::size_t missing = 0;
  for (const auto& r : recs) missing += r.status == "too_few_columns";
  return {ok >= 9, "n=100 theta=0.02 p=" + std::to_string(recs[0].p) + " full_recoveries=" +
                       std::to_string(ok) + "/10 too_few_columns=" + std::to_string(missing) +
                       " mean_rel_error=" + fmt(mean_error(recs)) + " (need >=9/10 below 1e-6)"};
}

Outcome verysparse_transition() {
  const auto recs = sweep_cell(100, h::SparsityAxis::Theta, 0.18, spud::Law::Gaussian,
                               h::Algorithm::VerySparse, 3018, 1e-6);
  const std::size_t ok = successes(recs);
  return {ok == 0, "n=100 theta=0.18 successes=" + std::to_string(ok) + "/10 mean_rel_error=" +
                       fmt(mean_error(recs)) + " (need 0/10)"};
}

Outcome rectangular() {
  const auto recs = sweep_cell(12, h::SparsityAxis::Theta, 0.3, spud::Law::Gaussian,
                               h::Algorithm::Rectangular, 4000, 1e-3, 9);
  const std::size_t ok = successes(recs);
  std::size_t failed = 0;
  for (const auto& r : recs) failed += r.status != "success";
  return {ok >= 8, "n=12 m=9 theta=0.3 p=" + std::to_string(recs[0].p) + " successes=" +
                       std::to_string(ok) + "/10 typed_failures=" + std::to_string(failed) +
                       " mean_rel_error=" + fmt(mean_error(recs)) + " (need >=8/10 below 1e-3)"};
}

Outcome l1_oracle() {
  std::size_t agree = 0;
  double worst = 0.0;
  spud::Rng rng(Seed(5000));
  for (std::uint32_t t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng.below(4);
    const std::size_t p = n + rng.below(13 - n);
    const Seed s(5001, {t});
    spud::L1Problem prob{spud::gen_dense_gaussian(n, p, s.child(0)),
                         spud::gen_dense_gaussian(n, 1, s.child(1)).col(0)};
    const auto sol = spud::solve_l1(prob);
    const double want = oracle::l1_vertex_minimum(prob.y, prob.r);
    const double rel = std::abs(sol.objective - want) / want;
    worst = std::max(worst, rel);
    agree += sol.status == spud::L1Status::Optimal && rel <= 1e-9;
  }
  return {agree == 200, std::to_string(agree) + "/200 instances match vertex enumeration, worst_rel_gap=" +
                            fmt(worst) + " (need all within 1e-9)"};
}

Outcome l1_identity() {
  std::size_t exact = 0, tried = 0;
  spud::Rng rng(Seed(5100));
  while (tried < 100) {
    const std::size_t n = 2 + rng.below(9);
    std::vector<double> b(n);
    for (double& v : b) v = rng.normal();
    std::vector<double> mags(n);
    for (std::size_t i = 0; i < n; ++i) mags[i] = std::abs(b[i]);
    const auto top = static_cast<std::size_t>(std::ranges::max_element(mags) - mags.begin());
    if (std::ranges::count(mags, mags[top]) != 1) continue;
    ++tried;
    const auto sol = spud::solve_l1({Matrix::identity(n), b});
    bool ok = sol.status == spud::L1Status::Optimal;
    for (std::size_t i = 0; i < n && ok; ++i) ok = sol.w[i] == (i == top ? 1.0 / b[top] : 0.0);
    exact += ok;
  }
  return {exact == 100, std::to_string(exact) + "/100 identity instances return e_j/b_j exactly"};
}

Outcome metric_invariance() {
  std::size_t ok = 0;
  double worst = 0.0;
  for (std::uint32_t t = 0; t < 1000; ++t) {
    const Seed s(6000, {t});
    spud::Rng rng(s.child(2));
    const std::size_t n = 2 + rng.below(11);
    const std::size_t m = 1 + rng.below(n);
    const Matrix a = spud::gen_dense_gaussian(n, m, s.child(0));
    std::vector<std::size_t> perm(m);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    rng.shuffle(std::span<std::size_t>(perm));
    Matrix scrambled(n, m);
    for (std::size_t j = 0; j < m; ++j) {
      const double scale = std::exp(2.0 * rng.normal()) * rng.rademacher();
      for (std::size_t r = 0; r < n; ++r) scrambled(r, j) = scale * a(r, perm[j]);
    }
    const double err = spud::relative_error(scrambled, a).rel_error;
    worst = std::max(worst, err);
    ok += err <= 1e-10;
  }
  return {ok == 1000, std::to_string(ok) + "/1000 scaled permutations score <= 1e-10, worst=" + fmt(worst)};
}

Outcome hungarian_bruteforce() {
  std::size_t ok = 0;
  double worst = 0.0;
  for (std::uint32_t t = 0; t < 1000; ++t) {
    const std::size_t n = 1 + t % 6;
    const Matrix cost = spud::gen_dense_gaussian(n, n, Seed(6100, {t}));
    double total = 0.0;
    spud::hungarian(cost, &total);
    const double gap = std::abs(total - oracle::permutation_minimum(cost));
    worst = std::max(worst, gap);
    ok += gap <= 1e-12;
  }
  return {ok == 1000, std::to_string(ok) + "/1000 Hungarian totals equal n!-enumeration for n<=6, worst_gap=" +
                          fmt(worst)};
}

/// All unit-l1 vectors in dimension n with entries on the (1/4)-grid.
std::vector<std::vector<double>> unit_grid_directions(std::size_t n) {
  std::vector<std::vector<double>> out;
  std::vector<double> v(n, 0.0);
  std::function<void(std::size_t, int)> fill = [&](std::size_t i, int left) {
    if (i == n) {
      if (left == 0) out.push_back(v);
      return;
    }
    for (int q = -left; q <= left; ++q) {
      v[i] = 0.25 * q;
      fill(i + 1, left - std::abs(q));
    }
    v[i] = 0.0;
  };
  fill(0, 4);
  return out;
}

Outcome mu_bounds_both() {
  std::size_t total = 0, upper_bad = 0, lower_bad = 0;
  double worst_ratio = 1e9;
  for (std::size_t n = 4; n <= 8; ++n) {
    for (double theta : {1.0 / static_cast<double>(n), 0.5, 1.0}) {
      const auto bounds = c::mu_bounds(n, 100, theta);
      for (const auto& v : unit_grid_directions(n)) {
        const double mu = c::mu_exact(v, theta, spud::Law::Rademacher, 100);
        ++total;
        upper_bad += mu > bounds.max * (1 + 1e-12);
        lower_bad += mu < bounds.min * (1 - 1e-12);
        worst_ratio = std::min(worst_ratio, mu / bounds.min);
      }
    }
  }
  return {upper_bad == 0 && lower_bad == 0,
          std::to_string(total) + " enumerated (n, theta, v) at n=4..8: upper violations=" +
              std::to_string(upper_bad) + ", lower violations=" + std::to_string(lower_bad) +
              ", min mu/mu_min=" + fmt(worst_ratio)};
}

Outcome mu_upper_only() {
  std::size_t total = 0, bad = 0;
  for (std::size_t n = 4; n <= 8; ++n)
    for (double theta : {1.0 / static_cast<double>(n), 0.5, 1.0})
      for (const auto& v : unit_grid_directions(n)) {
        ++total;
        bad += c::mu_exact(v, theta, spud::Law::Rademacher, 100) > c::mu_bounds(n, 100, theta).max * (1 + 1e-12);
      }
  return {bad == 0, "upper half alone: " + std::to_string(total - bad) + "/" + std::to_string(total) +
                        " satisfy mu_v <= p theta"};
}

Outcome net_count() {
  const auto net = c::build_linf_net({10, 0.5});
  const double bound = std::exp(2.0 / 0.5 * std::log(10.0));
  return {net.size() == 221 && static_cast<double>(net.size()) <= bound,
          "n=10 alpha=0.5 points=" + std::to_string(net.size()) + " bound=" + fmt(bound) + " (need 221)"};
}

c::DeviationReport deviation(std::size_t p, std::uint32_t trial, std::uint64_t root) {
  c::ConcentrationConfig cfg;
  cfg.n = 8;
  cfg.p = p;
  cfg.theta = 0.5;
  cfg.law = spud::Law::Rademacher;
  cfg.directions = 64;
  cfg.seed = Seed(root, {static_cast<std::uint32_t>(p), trial});
  return c::deviation_sup(cfg);
}

Outcome deviation_large_p() {
  std::size_t ok = 0;
  double worst = 0.0;
  for (std::uint32_t t = 0; t < 20; ++t) {
    const double dev = deviation(100000, t, 7000).max_rel_dev;
    worst = std::max(worst, dev);
    ok += dev < 0.1;
  }
  return {ok >= 19, "n=8 theta=0.5 p=1e5: max_rel_dev<0.1 in " + std::to_string(ok) +
                        "/20 trials, largest=" + fmt(worst) + " (need >=19/20)"};
}

Outcome deviation_monotone() {
  std::vector<double> medians;
  for (std::size_t mult : {1u, 4u, 16u, 64u, 256u}) {
    std::vector<double> devs;
    for (std::uint32_t t = 0; t < 20; ++t) devs.push_back(deviation(8 * mult, t, 7100).max_rel_dev);
    std::ranges::sort(devs);
    medians.push_back(0.5 * (devs[9] + devs[10]));
  }
  bool mono = true;
  std::string list;
  for (std::size_t i = 0; i < medians.size(); ++i) {
    if (i > 0 && medians[i] > medians[i - 1]) mono = false;
    list += (i ? "," : "") + fmt(medians[i]);
  }
  return {mono, "median max_rel_dev over p=n,4n,16n,64n,256n: " + list + " (need non-increasing)"};
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(SPUD_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("spud_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::vector<std::string> invocations = {
      "sweep --n 8,10 --k 1,2,3 --law rademacher --trials 3 --seed 31 --out ",
      "sweep --n 8 --theta 0.05,0.1 --algorithm verysparse --p 200 --trials 3 --seed 32 --out ",
      "sweep --n 8 --theta 0.2 --algorithm rectangular --m n-2 --trials 3 --seed 33 --jobs 2 --out ",
      "concentration deviation --n 6 --p 50,500 --theta 0.5 --trials 3 --seed 34 --out ",
  };
  std::size_t identical = 0;
  for (std::size_t i = 0; i < invocations.size(); ++i) {
    const fs::path a = dir / ("a" + std::to_string(i) + ".csv");
    const fs::path b = dir / ("b" + std::to_string(i) + ".csv");
    const bool ran = run_cli(invocations[i] + a.string()) == 0 && run_cli(invocations[i] + b.string()) == 0;
    const std::string sa = slurp(a);
    identical += ran && !sa.empty() && sa == slurp(b);
  }
  fs::remove_all(dir);
  return {identical == invocations.size(), std::to_string(identical) + "/" + std::to_string(invocations.size()) +
                                               " repeated CLI invocations produced byte-identical CSV"};
}

std::vector<Criterion> criteria() {
  return {
      {"erspud_success_n10", [] { return erspud_success(10); }},
      {"erspud_success_n20", [] { return erspud_success(20); }},
      {"erspud_success_n30", [] { return erspud_success(30); }},
      {"erspud_failure_k10", erspud_failure},
      {"verysparse_success", verysparse_success},
      {"verysparse_transition", verysparse_transition},
      {"rectangular_recovery", rectangular},
      {"l1_vertex_oracle", l1_oracle},
      {"l1_identity_closed_form", l1_identity},
      {"metric_invariance", metric_invariance},
      {"hungarian_bruteforce", hungarian_bruteforce},
      {"concentration_mu_bounds", mu_bounds_both},
      {"concentration_mu_upper_bound", mu_upper_only},
      {"concentration_net_count", net_count},
      {"concentration_large_p", deviation_large_p},
      {"concentration_monotone", deviation_monotone},
      {"determinism", determinism},
  };
}

}  // namespace

int main(int argc, char** argv) {
  const auto all = criteria();
  std::vector<std::string> wanted(argv + 1, argv + argc);
  if (wanted.size() == 1 && wanted[0] == "--list") {
    for (const auto& cr : all) std::cout << cr.name << '\n';
    return 0;
  }
  int failures = 0;
  std::size_t ran = 0;
  for (const auto& cr : all) {
    if (!wanted.empty() && std::ranges::find(wanted, cr.name) == wanted.end()) continue;
    ++ran;
    const Outcome o = cr.run();
    std::cout << (o.pass ? "PASS " : "FAIL ") << cr.name << ": " << o.detail << std::endl;
    failures += !o.pass;
  }
  if (ran == 0) {
    std::cerr << "no criterion matched\n";
    return 2;
  }
  return failures == 0 ? 0 : 1;
}
