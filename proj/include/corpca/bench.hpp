#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "corpca/datagen.hpp"
#include "corpca/estimators.hpp"
#include "corpca/spectrum.hpp"
#include "corpca/theory.hpp"

namespace corpca {

enum class BasisKind { kSparse, kRandom };

/// Monte Carlo experiment description, read from `key = value` text.
struct ExperimentConfig {
  Index n = 0;
  Index r = 0;
  Index alpha = 0;
  std::vector<double> lambda;
  NoiseKind noise = NoiseKind::kSddc;
  double q_gen = 0.0;
  Index s = 0;
  Index rho = 1;
  Index beta_tilde = 1;
  Index start = 0;
  bool wrap = false;
  double g_hat = 1.0;
  double thresh = 0.0;
  Index trials = 200;
  std::uint64_t base_seed = 0;
  BasisKind basis = BasisKind::kSparse;
  Index max_clusters = 0;  // 0: n
  // Theory-side overrides used by `bounds`.
  std::optional<double> zeta;
  std::optional<double> q_bound;
  std::optional<double> g_plus;
  std::optional<double> chi_plus;
};

ExperimentConfig parse_config(std::istream& in, const std::string& source = "<config>");
ExperimentConfig parse_config(const std::filesystem::path& path);
/// Throws ParameterError naming the offending key.
void validate_config(const ExperimentConfig& cfg);

enum class Method { kEvd, kClusterEvd };
const char* method_name(Method m);

struct TrialRecord {
  Index trial = 0;
  Method method = Method::kEvd;
  std::optional<double> se;  // empty when the estimator failed
  double time_ms = 0.0;
  Index vartheta_hat = 0;
  Index rank_hat = 0;
  double q_measured = 0.0;
  std::uint64_t seed = 0;
  std::vector<Index> cluster_sizes;
  std::string failure;
};

/// Runs both estimators on the data of one seeded trial (seed = base_seed + trial).
/// Estimator failures are recorded, not thrown.
std::vector<TrialRecord> run_trial(const ExperimentConfig& cfg, Index trial);

struct MethodSummary {
  double mean_se = 0.0;
  double mean_time_ms = 0.0;
  Index successes = 0;
  Index failure_count = 0;
};

struct SummaryRecord {
  MethodSummary evd;
  MethodSummary cluster_evd;
};

SummaryRecord summarize(const std::vector<TrialRecord>& records);

struct RunOptions {
  unsigned threads = 0;  // 0: hardware concurrency
  std::optional<std::filesystem::path> out_dir;
};

struct ExperimentResult {
  std::vector<TrialRecord> records;  // ordered by (trial, method)
  SummaryRecord summary;
};

/// All trials; writes trials.csv and summary.csv into out_dir when given.
ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunOptions& options = {});

inline constexpr const char* kTrialsCsvHeader = "trial,method,se,time_ms,vartheta_hat,rank_hat,q_measured,seed";

void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& records);
void write_summary_csv(std::ostream& out, const SummaryRecord& summary);

/// One line per eigenvalue: "index value cluster_id", both 1-based.
void emit_cluster_plot(std::span<const double> eigenvalues, const ClusterPartition& partition,
                       const std::filesystem::path& path);
void write_cluster_plot(std::ostream& out, std::span<const double> eigenvalues, const ClusterPartition& partition);

struct ClusterPlot {
  std::vector<double> eigenvalues;
  ClusterPartition partition;
};
ClusterPlot read_cluster_plot(std::istream& in);

/// Either a value or the reason the calculator refused the inputs.
struct BoundValue {
  std::string name;
  std::optional<double> value;
  std::string error;
};

struct BoundsReport {
  BoundInputs simple;
  BoundInputs cluster;
  ClusterStats clustering;
  std::vector<BoundValue> values;
};

/// Calculator outputs for an experiment config. f and eta come from Lambda and
/// the coefficient law; g_plus, chi_plus and vartheta from the g_hat partition of
/// Lambda unless overridden; q defaults to q_gen; zeta defaults to the largest
/// value each calculator admits.
BoundsReport compute_bounds(const ExperimentConfig& cfg);

struct SweepResult {
  Index instances = 0;
  Index applicable = 0;  // instances where the bound was defined
  Index violations = 0;
  double worst_margin = 0.0;  // max over applicable of measured - bound (lhs - rhs)
};

/// Random moving-block schedules (n = 500, s = 5, rho = 2, beta_tilde = 1, random
/// start and length within capacity) with random PSD blocks.
SweepResult block_bound_sweep(Index draws, std::uint64_t seed);

/// True when a static support repeated alpha times is rejected by the schedule validator.
bool static_support_rejected(Index n, Index alpha);

/// Random symmetric A with a positive gap at a random rank plus a random
/// symmetric perturbation, n <= 20.
SweepResult sin_theta_sweep(Index instances, std::uint64_t seed);

}  // namespace corpca
