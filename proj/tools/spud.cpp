// Command-line front end: generate, recover, eval, concentration, sweep.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "spud/concentration.hpp"
#include "spud/errors.hpp"
#include "spud/evaluation.hpp"
#include "spud/harness.hpp"
#include "spud/matrix_io.hpp"
#include "spud/recovery.hpp"

namespace {

using nlohmann::json;
using namespace spud;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitRecoveryFailed = 1;
constexpr int kExitUsage = 2;

struct Common {
  std::optional<std::uint64_t> seed;
  std::string law = "gaussian";
  std::optional<double> theta;
  std::optional<std::size_t> k;
  double zero_tol = 1e-8;
  double collinear_tol = 1e-8;
  std::size_t jobs = 1;
  double success_threshold = 1e-3;

  std::uint64_t root_seed() const {
    if (seed) return *seed;
    if (const char* env = std::getenv("SPUD_SEED")) {
      try {
        return std::stoull(env);
      } catch (const std::exception&) {
        throw InvalidArgument("SPUD_SEED is not an unsigned integer");
      }
    }
    return 0;
  }

  Sparsity sparsity() const {
    if (theta && k) throw InvalidArgument("give either --theta or --k, not both");
    if (k) return ExactKSparsity{*k};
    if (theta) return BernoulliSparsity{*theta};
    throw InvalidArgument("one of --theta or --k is required");
  }

  RecoveryOptions options() const {
    RecoveryOptions o;
    o.zero_tol = zero_tol;
    o.collinear_tol = collinear_tol;
    o.jobs = jobs;
    return o;
  }
};

json match_to_json(const MatchReport& r) {
  return {{"rel_error", r.rel_error},
          {"assignment", r.assignment},
          {"scales", r.scales},
          {"per_column_errors", r.per_column_errors}};
}

json diagnostics_to_json(const RecoveryDiagnostics& d) {
  return {{"solves", d.solves},
          {"failed_solves", d.failed_solves},
          {"discarded_candidates", d.discarded_candidates},
          {"groups", d.groups},
          {"well_represented", d.well_represented},
          {"rank_progression", d.rank_progression},
          {"notes", d.notes}};
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot open '" + path + "' for writing");
  out << j.dump(2) << '\n';
}

void add_seed_flag(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "Root seed (falls back to $SPUD_SEED, then 0)");
}

void add_sparsity_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("--theta", c.theta, "Bernoulli parameter of the coefficient model");
  cmd->add_option("--k", c.k, "Exact nonzeros per coefficient column");
  cmd->add_option("--law", c.law, "Value law")->check(CLI::IsMember({"rademacher", "gaussian"}));
}

void add_tolerance_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("--zero-tol", c.zero_tol, "Relative cutoff for numeric zeros");
  cmd->add_option("--collinear-tol", c.collinear_tol, "Collinearity tolerance (1 - |cos|)");
  cmd->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber);
}

int run_generate(const Common& c, std::size_t n, const std::string& p_text,
                 std::optional<std::size_t> m, const std::string& out_dir) {
  harness::InstanceSpec spec;
  spec.n = n;
  spec.m = m.value_or(n);
  if (spec.m == 0 || spec.m > n) throw InvalidArgument("--m must lie in [1, n]");
  spec.p = harness::parse_p_rule(p_text)(n);
  spec.sparsity = c.sparsity();
  spec.law = parse_law(c.law);
  const auto inst = harness::generate_instance(spec, Seed(c.root_seed()));
  fs::create_directories(out_dir);
  write_matrix_file((fs::path(out_dir) / "A.txt").string(), inst.a);
  write_matrix_file((fs::path(out_dir) / "X.txt").string(), inst.x);
  write_matrix_file((fs::path(out_dir) / "Y.txt").string(), inst.y);
  std::cout << "wrote A (" << inst.a.rows() << "x" << inst.a.cols() << "), X (" << inst.x.rows()
            << "x" << inst.x.cols() << "), Y to " << out_dir << '\n';
  return kExitOk;
}

int run_recover(const Common& c, const std::string& in, const std::string& algo,
                std::optional<std::size_t> m, const std::string& out_dir,
                const std::optional<std::string>& truth) {
  const Matrix y = read_matrix_file(in);
  const auto algorithm = harness::parse_algorithm(algo);
  const Seed seed(c.root_seed());
  const RecoveryOptions options = c.options();

  json report;
  report["algorithm"] = algo;
  RecoveryResult result;
  try {
    switch (algorithm) {
      case harness::Algorithm::ErSpud:
        result = recover_square(y, seed, options);
        break;
      case harness::Algorithm::VerySparse:
        result = recover_verysparse(y, options);
        break;
      case harness::Algorithm::Rectangular: {
        if (!m) throw InvalidArgument("rectangular recovery needs --m");
        SparseModel model;
        model.sparsity = c.sparsity();
        model.law = parse_law(c.law);
        result = recover_rectangular(y, *m, model, seed, options);
        break;
      }
    }
  } catch (const RecoveryFailed& e) {
    std::cerr << "recovery failed: " << e.what() << '\n';
    return kExitRecoveryFailed;
  } catch (const SingularMatrix& e) {
    std::cerr << "recovery failed: " << e.what() << " (pivot " << e.pivot() << ")\n";
    return kExitRecoveryFailed;
  }

  fs::create_directories(out_dir);
  report["status"] = status_name(result.status);
  report["diagnostics"] = diagnostics_to_json(result.diagnostics);
  report["row_sources"] = result.row_sources;
  if (!result.a_hat.empty()) write_matrix_file((fs::path(out_dir) / "A_hat.txt").string(), result.a_hat);
  if (!result.x_hat.empty()) write_matrix_file((fs::path(out_dir) / "X_hat.txt").string(), result.x_hat);
  if (truth) {
    const Matrix a = read_matrix_file(*truth);
    if (result.status == RecoveryStatus::Success) {
      report["match"] = match_to_json(relative_error(result.a_hat, a));
    } else {
      report["match"] = {{"rel_error", harness::padded_relative_error(result.a_hat, a)}};
    }
  }
  write_json((fs::path(out_dir) / "report.json").string(), report);
  std::cout << "status " << status_name(result.status);
  if (report.contains("match")) std::cout << " rel_error " << format_double(report["match"]["rel_error"].get<double>());
  std::cout << '\n';
  return result.status == RecoveryStatus::Success ? kExitOk : kExitRecoveryFailed;
}

int run_eval(const std::string& a_hat_path, const std::string& a_path,
             const std::optional<std::string>& out) {
  const Matrix a_hat = read_matrix_file(a_hat_path);
  const Matrix a = read_matrix_file(a_path);
  const MatchReport r = relative_error(a_hat, a);
  std::cout << "rel_error " << format_double(r.rel_error) << '\n';
  if (out) write_json(*out, match_to_json(r));
  return kExitOk;
}

int run_deviation(const Common& c, std::size_t n, const std::string& p_list, std::size_t trials,
                  std::size_t directions, double dev_c, const std::string& out_path) {
  if (!c.theta) throw InvalidArgument("--theta is required");
  const auto p_values = harness::parse_count_list(p_list);
  std::ofstream out(out_path);
  if (!out) throw InvalidArgument("cannot open '" + out_path + "' for writing");
  out << "n,p,theta,law,trial,seed,directions,max_rel_dev,bad_directions\n";
  const std::uint64_t root = c.root_seed();
  for (std::size_t pi = 0; pi < p_values.size(); ++pi) {
    for (std::size_t t = 0; t < trials; ++t) {
      concentration::ConcentrationConfig cfg;
      cfg.n = n;
      cfg.p = p_values[pi];
      cfg.theta = *c.theta;
      cfg.law = parse_law(c.law);
      cfg.c = dev_c;
      cfg.directions = directions;
      cfg.jobs = c.jobs;
      const std::uint64_t seed = harness::derive_trial_seed(root, pi, t);
      cfg.seed = Seed(seed);
      const auto rep = concentration::deviation_sup(cfg);
      out << n << ',' << cfg.p << ',' << format_double(cfg.theta) << ',' << c.law << ',' << t
          << ',' << seed << ',' << directions << ',' << format_double(rep.max_rel_dev) << ','
          << rep.bad_directions << '\n';
      out.flush();
    }
  }
  return kExitOk;
}

int run_net(std::size_t n, double alpha, const std::optional<std::string>& out_path) {
  concentration::NetSpec spec{n, alpha};
  const auto net = concentration::build_linf_net(spec);
  const double bound = std::exp(2.0 / alpha * std::log(static_cast<double>(n)));
  std::cout << "points " << net.size() << '\n' << "size_bound " << format_double(bound) << '\n';
  if (out_path) {
    Matrix m(net.size(), n);
    for (std::size_t i = 0; i < net.size(); ++i) std::ranges::copy(net[i], m.row(i).begin());
    write_matrix_file(*out_path, m);
  }
  return kExitOk;
}

int run_mu(const Common& c, const std::string& v_text, std::size_t p, std::size_t samples) {
  if (!c.theta) throw InvalidArgument("--theta is required");
  const auto v = harness::parse_real_list(v_text);
  const Law law = parse_law(c.law);
  const auto bounds = concentration::mu_bounds(v.size(), p, *c.theta);
  json j;
  j["mu_min"] = bounds.min;
  j["mu_max"] = bounds.max;
  if (v.size() <= concentration::kMaxExactDimension)
    j["mu_exact"] = concentration::mu_exact(v, *c.theta, law, p);
  const auto est = concentration::mu_estimate(v, *c.theta, law, p, samples, Seed(c.root_seed()));
  j["mu_estimate"] = est.mean;
  j["mu_estimate_stderr"] = est.std_error;
  std::cout << j.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse dictionary recovery: ER-SpUD, Greedy, rectangular and very-sparse algorithms"};
  app.require_subcommand(1);
  Common common;

  // generate
  auto* gen = app.add_subcommand("generate", "Generate a ground-truth instance A, X, Y = A X");
  std::size_t gen_n = 10;
  std::string gen_p = "nlogn:5";
  std::optional<std::size_t> gen_m;
  std::string gen_out = ".";
  gen->add_option("--n", gen_n, "Signal dimension")->required();
  gen->add_option("--p", gen_p, "Sample count or rule (nlogn[:c], n2log2n[:c])");
  gen->add_option("--m", gen_m, "Dictionary columns (defaults to n)");
  gen->add_option("--out", gen_out, "Output directory");
  add_seed_flag(gen, common);
  add_sparsity_flags(gen, common);

  // recover
  auto* rec = app.add_subcommand("recover", "Recover A and X from Y");
  std::string rec_in;
  std::string rec_algo = "erspud";
  std::optional<std::size_t> rec_m;
  std::string rec_out = ".";
  std::optional<std::string> rec_truth;
  rec->add_option("--in", rec_in, "Matrix file holding Y")->required();
  rec->add_option("--algorithm", rec_algo, "erspud | verysparse | rectangular");
  rec->add_option("--m", rec_m, "Dictionary columns (rectangular)");
  rec->add_option("--out", rec_out, "Output directory");
  rec->add_option("--truth", rec_truth, "Ground-truth A for a match report");
  add_seed_flag(rec, common);
  add_sparsity_flags(rec, common);
  add_tolerance_flags(rec, common);

  // eval
  auto* ev = app.add_subcommand("eval", "Compare a recovered dictionary with a reference");
  std::string ev_a, ev_b;
  std::optional<std::string> ev_out;
  ev->add_option("--a", ev_a, "Recovered dictionary")->required();
  ev->add_option("--b", ev_b, "Reference dictionary")->required();
  ev->add_option("--out", ev_out, "Write the match report as JSON");

  // concentration
  auto* conc = app.add_subcommand("concentration", "Concentration experiments");
  conc->require_subcommand(1);
  auto* dev = conc->add_subcommand("deviation", "Sampled sup of |‖X^T v‖_1 - mu_v| / mu_v");
  std::size_t dev_n = 8, dev_trials = 1, dev_dirs = 64;
  std::string dev_p = "1000";
  double dev_c = 0.1;
  std::string dev_out;
  dev->add_option("--n", dev_n, "Dimension")->required();
  dev->add_option("--p", dev_p, "Sample counts (list or start:stop:step)");
  dev->add_option("--trials", dev_trials, "Trials per p")->check(CLI::PositiveNumber);
  dev->add_option("--directions", dev_dirs, "Sampled directions")->check(CLI::PositiveNumber);
  dev->add_option("--c", dev_c, "Deviation constant");
  dev->add_option("--out", dev_out, "CSV output path")->required();
  add_seed_flag(dev, common);
  add_sparsity_flags(dev, common);
  dev->add_option("--jobs", common.jobs, "Worker threads")->check(CLI::PositiveNumber);

  auto* net = conc->add_subcommand("net", "Build the l_inf alpha-net of the l1 ball");
  std::size_t net_n = 10;
  double net_alpha = 0.5;
  std::optional<std::string> net_out;
  net->add_option("--n", net_n, "Dimension")->required();
  net->add_option("--alpha", net_alpha, "Grid spacing")->required();
  net->add_option("--out", net_out, "Write net points as a matrix file");

  auto* mu = conc->add_subcommand("mu", "Exact and estimated mu_v");
  std::string mu_v;
  std::size_t mu_p = 100, mu_samples = 100000;
  mu->add_option("--v", mu_v, "Direction, comma separated")->required();
  mu->add_option("--p", mu_p, "Columns of X");
  mu->add_option("--samples", mu_samples, "Monte-Carlo samples");
  add_seed_flag(mu, common);
  add_sparsity_flags(mu, common);

  // sweep
  auto* sw = app.add_subcommand("sweep", "Run a seeded experiment grid and write CSV");
  std::string sw_n = "10", sw_p = "nlogn:5", sw_algo = "erspud", sw_m = "n-3", sw_out;
  std::optional<std::string> sw_theta, sw_k;
  std::size_t sw_trials = 10;
  bool sw_runtime = false;
  sw->add_option("--n", sw_n, "n values (list or start:stop:step)");
  sw->add_option("--p", sw_p, "Sample count or rule (nlogn[:c], n2log2n[:c])");
  sw->add_option("--theta", sw_theta, "theta values (list or start:stop:step)");
  sw->add_option("--k", sw_k, "k values (list or start:stop:step)");
  sw->add_option("--law", common.law, "Value law")->check(CLI::IsMember({"rademacher", "gaussian"}));
  sw->add_option("--algorithm", sw_algo, "erspud | verysparse | rectangular");
  sw->add_option("--m", sw_m, "Rectangular dictionary width: m or n-K");
  sw->add_option("--trials", sw_trials, "Trials per cell")->check(CLI::PositiveNumber);
  sw->add_option("--out", sw_out, "CSV output path")->required();
  sw->add_option("--success-threshold", common.success_threshold, "rel_error below which a trial succeeds");
  sw->add_flag("--record-runtime", sw_runtime, "Fill runtime_ms (breaks byte-identical reruns)");
  add_seed_flag(sw, common);
  add_tolerance_flags(sw, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*gen) return run_generate(common, gen_n, gen_p, gen_m, gen_out);
    if (*rec) return run_recover(common, rec_in, rec_algo, rec_m, rec_out, rec_truth);
    if (*ev) return run_eval(ev_a, ev_b, ev_out);
    if (*dev) return run_deviation(common, dev_n, dev_p, dev_trials, dev_dirs, dev_c, dev_out);
    if (*net) return run_net(net_n, net_alpha, net_out);
    if (*mu) return run_mu(common, mu_v, mu_p, mu_samples);
    if (*sw) {
      harness::SweepConfig cfg;
      cfg.n_values = harness::parse_count_list(sw_n);
      cfg.p_rule = harness::parse_p_rule(sw_p);
      if (sw_theta && sw_k) throw InvalidArgument("give either --theta or --k, not both");
      if (sw_k) {
        cfg.axis = harness::SparsityAxis::K;
        cfg.sparsity_values = harness::parse_real_list(*sw_k);
      } else if (sw_theta) {
        cfg.axis = harness::SparsityAxis::Theta;
        cfg.sparsity_values = harness::parse_real_list(*sw_theta);
      } else {
        throw InvalidArgument("one of --theta or --k is required");
      }
      cfg.law = parse_law(common.law);
      cfg.trials = sw_trials;
      cfg.algorithm = harness::parse_algorithm(sw_algo);
      cfg.m_rule = harness::parse_m_rule(sw_m);
      cfg.root_seed = common.root_seed();
      cfg.out_path = sw_out;
      cfg.success_threshold = common.success_threshold;
      cfg.options = common.options();
      cfg.jobs = common.jobs;
      cfg.record_runtime = sw_runtime;
      harness::run_sweep(cfg);
      return kExitOk;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kExitUsage;
  } catch (const RecoveryFailed& e) {
    std::cerr << "recovery failed: " << e.what() << '\n';
    return kExitRecoveryFailed;
  } catch (const UnsupportedSize& e) {
    std::cerr << "unsupported size: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRecoveryFailed;
  }
  return kExitUsage;
}
