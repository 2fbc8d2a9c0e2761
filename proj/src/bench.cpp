#include "corpca/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "corpca/matrix_io.hpp"

namespace corpca {

// ---------------------------------------------------------------------------
// Config

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Entry {
  std::string value;
  int line = 0;
};

class KeyReader {
 public:
  KeyReader(std::map<std::string, Entry> entries, std::string source)
      : entries_(std::move(entries)), source_(std::move(source)) {}

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  [[noreturn]] void fail(const std::string& key, const std::string& why) const {
    const auto it = entries_.find(key);
    const std::string where = it == entries_.end() ? source_ : source_ + ":" + std::to_string(it->second.line);
    throw ParseError(where + ": key '" + key + "': " + why);
  }

  const std::string& raw(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) fail(key, "missing required key");
    return it->second.value;
  }

  double real(const std::string& key) const {
    const std::string& v = raw(key);
    double out = 0.0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size() || !std::isfinite(out)) fail(key, "not a real number: '" + v + "'");
    return out;
  }

  long long integer(const std::string& key) const {
    const std::string& v = raw(key);
    long long out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size()) fail(key, "not an integer: '" + v + "'");
    return out;
  }

  std::uint64_t unsigned_integer(const std::string& key) const {
    const std::string& v = raw(key);
    std::uint64_t out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size()) fail(key, "not an unsigned integer: '" + v + "'");
    return out;
  }

  bool boolean(const std::string& key) const {
    const std::string& v = raw(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    fail(key, "not a boolean: '" + v + "'");
  }

  std::vector<double> reals(const std::string& key) const {
    std::string v = raw(key);
    std::replace(v.begin(), v.end(), ',', ' ');
    std::istringstream in(v);
    std::vector<double> out;
    std::string token;
    while (in >> token) {
      double x = 0.0;
      const auto res = std::from_chars(token.data(), token.data() + token.size(), x);
      if (res.ec != std::errc() || res.ptr != token.data() + token.size() || !std::isfinite(x)) {
        fail(key, "not a real number: '" + token + "'");
      }
      out.push_back(x);
    }
    if (out.empty()) fail(key, "empty list");
    return out;
  }

 private:
  std::map<std::string, Entry> entries_;
  std::string source_;
};

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "n",      "r",     "alpha",  "lambda",     "noise",  "q_gen",  "s",        "rho",
      "beta_tilde", "start", "wrap", "g_hat", "thresh", "trials", "base_seed", "basis",
      "max_clusters", "zeta", "q_bound", "g_plus", "chi_plus"};
  return keys;
}

}  // namespace

ExperimentConfig parse_config(std::istream& in, const std::string& source) {
  std::map<std::string, Entry> entries;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError(source + ":" + std::to_string(line_no) + ": expected 'key = value', got '" + line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto& keys = known_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ParseError(source + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    if (value.empty()) throw ParseError(source + ":" + std::to_string(line_no) + ": key '" + key + "' has no value");
    if (!entries.emplace(key, Entry{value, line_no}).second) {
      throw ParseError(source + ":" + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
  }

  const KeyReader rd(std::move(entries), source);
  ExperimentConfig cfg;
  cfg.n = rd.integer("n");
  cfg.r = rd.integer("r");
  cfg.alpha = rd.integer("alpha");
  cfg.lambda = rd.reals("lambda");
  const std::string& noise = rd.raw("noise");
  if (noise == "sddc") {
    cfg.noise = NoiseKind::kSddc;
  } else if (noise == "missing") {
    cfg.noise = NoiseKind::kMissing;
  } else {
    rd.fail("noise", "expected 'missing' or 'sddc'");
  }
  cfg.g_hat = rd.real("g_hat");
  cfg.thresh = rd.real("thresh");
  if (rd.has("q_gen")) cfg.q_gen = rd.real("q_gen");
  if (rd.has("s")) cfg.s = rd.integer("s");
  if (rd.has("rho")) cfg.rho = rd.integer("rho");
  if (rd.has("beta_tilde")) cfg.beta_tilde = rd.integer("beta_tilde");
  if (rd.has("start")) cfg.start = rd.integer("start");
  if (rd.has("wrap")) cfg.wrap = rd.boolean("wrap");
  if (rd.has("trials")) cfg.trials = rd.integer("trials");
  if (rd.has("base_seed")) cfg.base_seed = rd.unsigned_integer("base_seed");
  if (rd.has("basis")) {
    const std::string& b = rd.raw("basis");
    if (b == "sparse") {
      cfg.basis = BasisKind::kSparse;
    } else if (b == "random") {
      cfg.basis = BasisKind::kRandom;
    } else {
      rd.fail("basis", "expected 'sparse' or 'random'");
    }
  }
  if (rd.has("max_clusters")) cfg.max_clusters = rd.integer("max_clusters");
  if (rd.has("zeta")) cfg.zeta = rd.real("zeta");
  if (rd.has("q_bound")) cfg.q_bound = rd.real("q_bound");
  if (rd.has("g_plus")) cfg.g_plus = rd.real("g_plus");
  if (rd.has("chi_plus")) cfg.chi_plus = rd.real("chi_plus");

  try {
    validate_config(cfg);
  } catch (const ParameterError& e) {
    throw ParameterError(source + ": " + e.what());
  }
  return cfg;
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  return parse_config(in, path.string());
}

void validate_config(const ExperimentConfig& cfg) {
  auto bad = [](const std::string& key, const std::string& why) {
    throw ParameterError("key '" + key + "': " + why);
  };
  if (cfg.n < 1) bad("n", "must be positive");
  if (cfg.r < 1 || cfg.r > cfg.n) bad("r", "must satisfy 1 <= r <= n");
  if (cfg.alpha < 1) bad("alpha", "must be positive");
  if (static_cast<Index>(cfg.lambda.size()) != cfg.r) bad("lambda", "needs exactly r entries");
  for (std::size_t j = 0; j < cfg.lambda.size(); ++j) {
    if (!(cfg.lambda[j] > 0.0)) bad("lambda", "entries must be > 0");
    if (j > 0 && cfg.lambda[j] > cfg.lambda[j - 1]) bad("lambda", "entries must be non-increasing");
  }
  if (!(cfg.q_gen >= 0.0)) bad("q_gen", "must be >= 0");
  if (cfg.s < 0 || cfg.s > cfg.n) bad("s", "must satisfy 0 <= s <= n");
  if (cfg.rho < 1) bad("rho", "must be >= 1");
  if (cfg.beta_tilde < 1) bad("beta_tilde", "must be >= 1");
  if (cfg.start < 0 || cfg.start + cfg.s > cfg.n) bad("start", "block must fit: start + s <= n");
  if (!(cfg.g_hat >= 1.0)) bad("g_hat", "must be >= 1");
  if (!(cfg.thresh > 0.0)) bad("thresh", "must be > 0");
  if (cfg.trials < 1) bad("trials", "must be >= 1");
  if (cfg.max_clusters < 0) bad("max_clusters", "must be >= 0");
  if (cfg.zeta && !(*cfg.zeta > 0.0)) bad("zeta", "must be > 0");
  if (cfg.q_bound && !(*cfg.q_bound >= 0.0)) bad("q_bound", "must be >= 0");
  if (cfg.g_plus && !(*cfg.g_plus >= 1.0)) bad("g_plus", "must be >= 1");
  if (cfg.chi_plus && !(*cfg.chi_plus >= 0.0)) bad("chi_plus", "must be >= 0");
}

const char* method_name(Method m) { return m == Method::kEvd ? "evd" : "cluster_evd"; }

// ---------------------------------------------------------------------------
// Trials

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

/// Replays an already drawn first block, then keeps pulling from the stream.
/// Time spent generating data is accumulated so callers can exclude it.
class ReplaySource final : public BlockSource {
 public:
  ReplaySource(RealMatrix first, ObservationStream& stream) : first_(std::move(first)), stream_(stream) {}

  RealMatrix next_block(Index alpha) override {
    if (!replayed_) {
      if (alpha != first_.cols()) throw ParameterError("replay: block length mismatch");
      replayed_ = true;
      consumed_ += alpha;
      return first_;
    }
    const auto t0 = Clock::now();
    RealMatrix block = stream_.next_block(alpha);
    generation_ms_ += elapsed_ms(t0);
    consumed_ += alpha;
    return block;
  }

  Index consumed() const override { return consumed_; }
  double generation_ms() const { return generation_ms_; }

 private:
  RealMatrix first_;
  ObservationStream& stream_;
  bool replayed_ = false;
  Index consumed_ = 0;
  double generation_ms_ = 0.0;
};

}  // namespace

std::vector<TrialRecord> run_trial(const ExperimentConfig& cfg, Index trial) {
  validate_config(cfg);
  const std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(trial);
  Rng rng(seed);
  BasisMatrix basis = cfg.basis == BasisKind::kSparse ? sparse_basis(cfg.n, cfg.r) : random_basis(cfg.n, cfg.r, rng);
  SignalModel model(basis, cfg.lambda);
  ObservationStream stream(model, cfg.noise, cfg.q_gen, MotionParams{cfg.s, cfg.rho, cfg.beta_tilde, cfg.start, cfg.wrap},
                           rng);

  TrialRecord evd{trial, Method::kEvd, std::nullopt, 0.0, 0, 0, 0.0, seed, {}, {}};
  TrialRecord cevd{trial, Method::kClusterEvd, std::nullopt, 0.0, 0, 0, 0.0, seed, {}, {}};

  RealMatrix first;
  try {
    first = stream.next_block(cfg.alpha);
  } catch (const Error& e) {
    evd.failure = cevd.failure = e.what();
    return {evd, cevd};
  }
  evd.q_measured = stream.q_measured();

  {
    const auto t0 = Clock::now();
    try {
      const BasisMatrix p_hat = simple_evd(first, EvdConfig{cfg.thresh});
      evd.time_ms = elapsed_ms(t0);
      evd.se = subspace_error(p_hat, basis);
      evd.rank_hat = p_hat.cols();
      evd.vartheta_hat = 1;
      evd.cluster_sizes = {p_hat.cols()};
    } catch (const Error& e) {
      evd.time_ms = elapsed_ms(t0);
      evd.failure = e.what();
    }
  }

  {
    ReplaySource source(std::move(first), stream);
    const ClusterEvdConfig ccfg{cfg.alpha, cfg.g_hat, cfg.thresh};
    const auto t0 = Clock::now();
    try {
      const ClusterEvdResult res = cluster_evd(source, ccfg, cfg.max_clusters);
      cevd.time_ms = elapsed_ms(t0) - source.generation_ms();
      cevd.se = subspace_error(res.p_hat, basis);
      cevd.rank_hat = res.p_hat.cols();
      cevd.vartheta_hat = res.vartheta_hat;
      cevd.cluster_sizes = res.cluster_sizes;
    } catch (const Error& e) {
      cevd.time_ms = elapsed_ms(t0) - source.generation_ms();
      cevd.failure = e.what();
    }
    cevd.q_measured = stream.q_measured();
  }
  return {evd, cevd};
}

SummaryRecord summarize(const std::vector<TrialRecord>& records) {
  SummaryRecord s;
  double se_sum[2] = {0.0, 0.0};
  double time_sum[2] = {0.0, 0.0};
  for (const auto& rec : records) {
    MethodSummary& m = rec.method == Method::kEvd ? s.evd : s.cluster_evd;
    const int idx = rec.method == Method::kEvd ? 0 : 1;
    if (rec.se) {
      ++m.successes;
      se_sum[idx] += *rec.se;
      time_sum[idx] += rec.time_ms;
    } else {
      ++m.failure_count;
    }
  }
  auto finish = [](MethodSummary& m, double se, double time) {
    m.mean_se = m.successes ? se / static_cast<double>(m.successes) : std::nan("");
    m.mean_time_ms = m.successes ? time / static_cast<double>(m.successes) : std::nan("");
  };
  finish(s.evd, se_sum[0], time_sum[0]);
  finish(s.cluster_evd, se_sum[1], time_sum[1]);
  return s;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunOptions& options) {
  validate_config(cfg);
  const auto trials = static_cast<std::size_t>(cfg.trials);
  std::vector<std::vector<TrialRecord>> per_trial(trials);

  unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, trials));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t t = next++; t < trials; t = next++) {
      try {
        per_trial[t] = run_trial(cfg, static_cast<Index>(t));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  ExperimentResult result;
  for (auto& recs : per_trial) {
    for (auto& r : recs) result.records.push_back(std::move(r));
  }
  result.summary = summarize(result.records);

  if (options.out_dir) {
    const auto& dir = *options.out_dir;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
    const auto trials_path = dir / "trials.csv";
    std::ofstream trials_out(trials_path);
    if (!trials_out) throw IoError("cannot write '" + trials_path.string() + "'");
    write_trials_csv(trials_out, result.records);
    const auto summary_path = dir / "summary.csv";
    std::ofstream summary_out(summary_path);
    if (!summary_out) throw IoError("cannot write '" + summary_path.string() + "'");
    write_summary_csv(summary_out, result.summary);
    if (!trials_out || !summary_out) throw IoError("write failed in '" + dir.string() + "'");
  }
  return result;
}

void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
  out << kTrialsCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.trial << ',' << method_name(r.method) << ',' << (r.se ? format_double(*r.se) : std::string("NA")) << ','
        << format_double(r.time_ms) << ',' << r.vartheta_hat << ',' << r.rank_hat << ','
        << format_double(r.q_measured) << ',' << r.seed << '\n';
  }
}

void write_summary_csv(std::ostream& out, const SummaryRecord& summary) {
  out << "method,mean_se,mean_time_ms,successes,failure_count\n";
  auto row = [&](const char* name, const MethodSummary& m) {
    out << name << ',' << format_double(m.mean_se) << ',' << format_double(m.mean_time_ms) << ',' << m.successes
        << ',' << m.failure_count << '\n';
  };
  row("evd", summary.evd);
  row("cluster_evd", summary.cluster_evd);
}

// ---------------------------------------------------------------------------
// Plot data

void write_cluster_plot(std::ostream& out, std::span<const double> eigenvalues, const ClusterPartition& partition) {
  (void)partition_stats(partition, eigenvalues);
  for (std::size_t k = 0; k < partition.clusters.size(); ++k) {
    const auto& c = partition.clusters[k];
    for (Index i = c.begin; i < c.end; ++i) {
      out << (i + 1) << ' ' << format_double(eigenvalues[static_cast<std::size_t>(i)]) << ' ' << (k + 1) << '\n';
    }
  }
}

void emit_cluster_plot(std::span<const double> eigenvalues, const ClusterPartition& partition,
                       const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_cluster_plot(out, eigenvalues, partition);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

ClusterPlot read_cluster_plot(std::istream& in) {
  ClusterPlot plot;
  std::vector<Index> sizes;
  std::string line;
  long long expected_index = 1;
  long long current_cluster = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::istringstream row(line);
    long long index = 0, cluster = 0;
    std::string value;
    if (!(row >> index >> value >> cluster)) throw ParseError("cluster plot: malformed line '" + line + "'");
    if (index != expected_index++) throw ParseError("cluster plot: indices must run 1, 2, ...");
    double v = 0.0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
    if (res.ec != std::errc() || res.ptr != value.data() + value.size()) throw ParseError("cluster plot: bad value '" + value + "'");
    plot.eigenvalues.push_back(v);
    if (cluster == current_cluster) {
      ++sizes.back();
    } else if (cluster == current_cluster + 1) {
      sizes.push_back(1);
      current_cluster = cluster;
    } else {
      throw ParseError("cluster plot: cluster ids must be consecutive from 1");
    }
  }
  plot.partition = ClusterPartition::from_sizes(sizes, plot.eigenvalues);
  return plot;
}

// ---------------------------------------------------------------------------
// Theory report

BoundsReport compute_bounds(const ExperimentConfig& cfg) {
  validate_config(cfg);
  BoundsReport rep;
  const double f = cfg.lambda.front() / cfg.lambda.back();
  const ClusterPartition part = g_partition(cfg.lambda, cfg.g_hat);
  rep.clustering = partition_stats(part, cfg.lambda);
  Index smallest = cfg.r;
  for (Index s : part.sizes()) smallest = std::min(smallest, s);

  const double r = static_cast<double>(cfg.r);
  BoundInputs base;
  base.n = cfg.n;
  base.r = cfg.r;
  base.r_k = smallest;
  base.f = f;
  base.g_plus = cfg.g_plus.value_or(rep.clustering.g_eff);
  base.chi_plus = cfg.chi_plus.value_or(rep.clustering.chi);
  base.q = cfg.q_bound.value_or(cfg.q_gen);
  base.eta = 3.0;
  base.vartheta = rep.clustering.vartheta;

  rep.simple = base;
  rep.simple.zeta = cfg.zeta.value_or(0.01 / r);
  rep.cluster = base;
  rep.cluster.zeta = cfg.zeta.value_or(std::min(1e-4 / (r * r), 0.01 / (r * r * f)));

  auto eval = [&](const std::string& name, auto fn, const BoundInputs& in) {
    BoundValue v{name, std::nullopt, {}};
    try {
      v.value = fn(in);
    } catch (const Error& e) {
      v.error = e.what();
    }
    rep.values.push_back(std::move(v));
  };
  eval("alpha0_simple", alpha0_simple, rep.simple);
  eval("beta_frac_simple", beta_frac_simple, rep.simple);
  eval("alpha0_cluster", alpha0_cluster, rep.cluster);
  eval("beta_frac_cluster", beta_frac_cluster, rep.cluster);
  return rep;
}

// ---------------------------------------------------------------------------
// Oracle sweeps

namespace {

RealMatrix random_psd(Index k, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<Index> rank_dist(1, std::max<Index>(1, k));
  const Index rank = rank_dist(rng);
  RealMatrix b(k, rank);
  for (Index j = 0; j < rank; ++j)
    for (Index i = 0; i < k; ++i) b(i, j) = normal(rng);
  std::uniform_real_distribution<double> scale(0.1, 10.0);
  RealMatrix a = scale(rng) * b * b.transpose();
  return 0.5 * (a + a.transpose());
}

}  // namespace

SweepResult block_bound_sweep(Index draws, std::uint64_t seed) {
  constexpr Index n = 500, s = 5, rho = 2, beta_tilde = 1;
  constexpr Index step = (s + rho - 1) / rho;
  Rng rng(seed);
  SweepResult out;
  out.worst_margin = -std::numeric_limits<double>::infinity();
  for (Index d = 0; d < draws; ++d) {
    // start + s + step * alpha <= n
    std::uniform_int_distribution<Index> alpha_dist(1, (n - s) / step);
    const Index alpha = alpha_dist(rng);
    std::uniform_int_distribution<Index> start_dist(0, n - s - step * alpha);
    const Index start = start_dist(rng);
    const SupportSchedule schedule = generate_support_schedule(n, alpha, s, rho, beta_tilde, start);
    std::vector<RealMatrix> blocks;
    blocks.reserve(static_cast<std::size_t>(alpha));
    for (Index t = 0; t < alpha; ++t) blocks.push_back(random_psd(static_cast<Index>(schedule.at(t).size()), rng));
    const M2BoundCheck check = verify_m2_bound(schedule, blocks);
    ++out.instances;
    ++out.applicable;
    if (!check.holds) ++out.violations;
    out.worst_margin = std::max(out.worst_margin, check.lhs - check.rhs);
  }
  return out;
}

bool static_support_rejected(Index n, Index alpha) {
  IndexSet block;
  for (Index i = 0; i < std::min<Index>(5, n); ++i) block.push_back(i);
  std::vector<IndexSet> supports(static_cast<std::size_t>(alpha), block);
  try {
    SupportSchedule schedule(n, std::move(supports), 5, 2, 1);
  } catch (const ScheduleError&) {
    return true;
  }
  return false;
}

SweepResult sin_theta_sweep(Index instances, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  SweepResult out;
  out.worst_margin = -std::numeric_limits<double>::infinity();
  for (Index it = 0; it < instances; ++it) {
    const Index n = std::uniform_int_distribution<Index>(2, 20)(rng);
    const Index k = std::uniform_int_distribution<Index>(1, n - 1)(rng);
    RealMatrix g(n, n);
    for (Index j = 0; j < n; ++j)
      for (Index i = 0; i < n; ++i) g(i, j) = normal(rng);
    const RealMatrix q = orthonormal_columns(g).mat();

    // Spectrum of A_perp in [-1, 1], spectrum of A strictly above it.
    RealVector spec(n);
    double perp_max = -1.0;
    for (Index i = k; i < n; ++i) {
      spec(i) = 2.0 * unit(rng) - 1.0;
      perp_max = std::max(perp_max, spec(i));
    }
    const double gap = 0.01 + 2.0 * unit(rng);
    double a_min = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < k; ++i) {
      spec(i) = perp_max + gap + 2.0 * unit(rng);
      a_min = std::min(a_min, spec(i));
    }
    RealMatrix a = q * spec.asDiagonal() * q.transpose();
    a = 0.5 * (a + a.transpose().eval());

    RealMatrix h(n, n);
    for (Index j = 0; j < n; ++j)
      for (Index i = 0; i < n; ++i) h(i, j) = normal(rng);
    h = 0.5 * (h + h.transpose().eval());
    h *= gap * unit(rng) / std::max(spectral_norm(h), 1e-300);

    ++out.instances;
    const BasisMatrix e = BasisMatrix::adopt(q.leftCols(k));
    double bound = 0.0;
    try {
      bound = sin_theta_bound(a_min, perp_max, spectral_norm(h));
    } catch (const GapError&) {
      continue;
    }
    ++out.applicable;
    const double measured = subspace_error(top_eigenvectors(RealMatrix(a + h), k), e);
    if (measured > bound + 1e-9) ++out.violations;
    out.worst_margin = std::max(out.worst_margin, measured - bound);
  }
  return out;
}

}  // namespace corpca
