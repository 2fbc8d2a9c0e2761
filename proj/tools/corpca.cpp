// Command line harness: Monte Carlo runs, eigenvalue partitions, bound
// calculators and the oracle sweeps.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "corpca/bench.hpp"
#include "corpca/matrix_io.hpp"

namespace fs = std::filesystem;
using namespace corpca;

namespace {

constexpr const char* kOutDirEnv = "CORPCA_OUT_DIR";

fs::path resolve_out_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
  return "results";
}

int cmd_run(const std::string& config_path, std::optional<Index> trials, std::optional<std::uint64_t> seed,
            const std::string& out_flag, unsigned threads) {
  ExperimentConfig cfg = parse_config(fs::path(config_path));
  if (trials) cfg.trials = *trials;
  if (seed) cfg.base_seed = *seed;
  RunOptions opts;
  opts.threads = threads;
  opts.out_dir = resolve_out_dir(out_flag);
  const ExperimentResult res = run_experiment(cfg, opts);
  std::cout << "trials      " << cfg.trials << " (base_seed " << cfg.base_seed << ")\n";
  write_summary_csv(std::cout, res.summary);
  std::cout << "wrote " << (*opts.out_dir / "trials.csv").string() << " and "
            << (*opts.out_dir / "summary.csv").string() << '\n';
  return 0;
}

int cmd_partition(const std::string& eigs_path, double g, const std::string& out_path) {
  const RealMatrix m = load_matrix(eigs_path);
  if (m.rows() != 1 && m.cols() != 1) throw ParseError(eigs_path + ": expected a single row or column of eigenvalues");
  std::vector<double> eigs(m.data(), m.data() + m.size());
  const ClusterPartition part = g_partition(eigs, g);
  const ClusterStats st = partition_stats(part, eigs);
  emit_cluster_plot(std::span<const double>(eigs.data(), static_cast<std::size_t>(part.covered())), part, out_path);
  std::cout << "vartheta = " << st.vartheta << "\ng_eff = " << format_double(st.g_eff)
            << "\nchi = " << format_double(st.chi) << "\nf = " << format_double(st.f) << "\nsizes =";
  for (Index s : part.sizes()) std::cout << ' ' << s;
  std::cout << "\nwrote " << out_path << '\n';
  return 0;
}

int cmd_bounds(const std::string& config_path) {
  const ExperimentConfig cfg = parse_config(fs::path(config_path));
  const BoundsReport rep = compute_bounds(cfg);
  std::cout << "f = " << format_double(rep.simple.f) << "\nvartheta = " << rep.clustering.vartheta
            << "\ng_plus = " << format_double(rep.cluster.g_plus) << "\nchi_plus = " << format_double(rep.cluster.chi_plus)
            << "\nq = " << format_double(rep.simple.q) << "\neta = " << format_double(rep.simple.eta)
            << "\nr_k = " << rep.cluster.r_k << "\nzeta_simple = " << format_double(rep.simple.zeta)
            << "\nzeta_cluster = " << format_double(rep.cluster.zeta) << '\n';
  for (const auto& v : rep.values) {
    std::cout << v.name << " = ";
    if (v.value)
      std::cout << format_double(*v.value) << '\n';
    else
      std::cout << "n/a (" << v.error << ")\n";
  }
  return 0;
}

int cmd_verify(Index block_draws, Index sin_theta_instances, std::uint64_t seed) {
  bool ok = true;
  const SweepResult block = block_bound_sweep(block_draws, seed);
  std::cout << "block bound: " << block.instances << " draws, " << block.violations
            << " violations, worst lhs-rhs " << format_double(block.worst_margin) << '\n';
  ok = ok && block.violations == 0;
  const bool rejected = static_support_rejected(500, 300);
  std::cout << "static-support counterexample rejected: " << (rejected ? "yes" : "no") << '\n';
  ok = ok && rejected;
  const SweepResult st = sin_theta_sweep(sin_theta_instances, seed + 1);
  std::cout << "sin-theta bound: " << st.instances << " instances, " << st.applicable << " with positive gap, "
            << st.violations << " violations, worst measured-bound " << format_double(st.worst_margin) << '\n';
  ok = ok && st.violations == 0;
  std::cout << (ok ? "OK" : "FAILED") << '\n';
  return ok ? 0 : 1;
}

int cmd_schedule(const std::string& config_path, const std::string& out_path) {
  const ExperimentConfig cfg = parse_config(fs::path(config_path));
  const SupportSchedule schedule = generate_support_schedule(cfg.n, cfg.alpha, cfg.s, cfg.rho, cfg.beta_tilde,
                                                             cfg.start, cfg.wrap);
  std::ofstream out(out_path);
  if (!out) throw IoError("cannot open '" + out_path + "' for writing");
  write_schedule(out, schedule);
  std::cout << "wrote " << schedule.length() << " support sets to " << out_path << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Principal subspace estimation under data-dependent noise"};
  app.require_subcommand(1);

  std::string config_path, out_flag;
  std::optional<Index> trials;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
  auto* run = app.add_subcommand("run", "Monte Carlo comparison of simple EVD and cluster EVD");
  run->add_option("config", config_path, "Experiment config file")->required()->check(CLI::ExistingFile);
  run->add_option("--trials", trials, "Override the number of trials");
  run->add_option("--seed", seed, "Override base_seed");
  run->add_option("--out", out_flag, std::string("Output directory (default: $") + kOutDirEnv + " or ./results)");
  run->add_option("--threads", threads, "Worker threads (0: all cores)");

  std::string eigs_path, plot_path;
  double g = 1.0;
  auto* part = app.add_subcommand("partition", "g-condition-number partition of an eigenvalue list");
  part->add_option("eigs", eigs_path, "Eigenvalues in matrix format (one row or column)")->required()->check(CLI::ExistingFile);
  part->add_option("--g", g, "Within-cluster condition number g >= 1")->required();
  part->add_option("--out", plot_path, "Plot-data output file")->required();

  std::string bounds_config;
  auto* bounds = app.add_subcommand("bounds", "Sample-complexity and beta/alpha calculators");
  bounds->add_option("config", bounds_config, "Experiment config file")->required()->check(CLI::ExistingFile);

  Index block_draws = 1000, sin_instances = 500;
  std::uint64_t verify_seed = 2024;
  auto* verify = app.add_subcommand("verify", "Block-bound and sin-theta oracle sweeps");
  verify->add_option("--block-draws", block_draws, "Random schedules for the block bound");
  verify->add_option("--sin-theta-instances", sin_instances, "Random sin-theta instances");
  verify->add_option("--seed", verify_seed, "Sweep seed");

  std::string sched_config, sched_out;
  auto* sched = app.add_subcommand("schedule", "Dump the support schedule of the first block");
  sched->add_option("config", sched_config, "Experiment config file")->required()->check(CLI::ExistingFile);
  sched->add_option("--out", sched_out, "Schedule output file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config_path, trials, seed, out_flag, threads);
    if (*part) return cmd_partition(eigs_path, g, plot_path);
    if (*bounds) return cmd_bounds(bounds_config);
    if (*verify) return cmd_verify(block_draws, sin_instances, verify_seed);
    if (*sched) return cmd_schedule(sched_config, sched_out);
  } catch (const corpca::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
