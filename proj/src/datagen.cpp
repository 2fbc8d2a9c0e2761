#include "corpca/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace corpca {

SignalModel::SignalModel(BasisMatrix basis, std::vector<double> lambda, CoefficientLaw law)
    : basis_(std::move(basis)), lambda_(std::move(lambda)), law_(law) {
  if (basis_.cols() < 1) throw DimensionError("signal model needs r >= 1");
  if (static_cast<Index>(lambda_.size()) != basis_.cols()) {
    throw DimensionError("Lambda has " + std::to_string(lambda_.size()) + " entries, basis has " +
                         std::to_string(basis_.cols()) + " columns");
  }
  for (std::size_t j = 0; j < lambda_.size(); ++j) {
    if (!(lambda_[j] > 0.0) || !std::isfinite(lambda_[j])) {
      throw ParameterError("Lambda entries must be finite and strictly positive (entry " +
                           std::to_string(j) + ")");
    }
    if (j > 0 && lambda_[j] > lambda_[j - 1]) throw OrderError("Lambda must be non-increasing");
  }
}

double SignalModel::eta() const noexcept {
  switch (law_) {
    case CoefficientLaw::kUniform:
      return 3.0;
  }
  return 3.0;
}

RealVector sample_coefficients(const SignalModel& model, Rng& rng) {
  const auto& lambda = model.lambda();
  RealVector a(static_cast<Index>(lambda.size()));
  for (std::size_t j = 0; j < lambda.size(); ++j) {
    const double half_width = std::sqrt(3.0 * lambda[j]);
    std::uniform_real_distribution<double> dist(-half_width, half_width);
    a(static_cast<Index>(j)) = dist(rng);
  }
  return a;
}

BasisMatrix sparse_basis(Index n, Index r) {
  if (r < 1 || r > n) throw DimensionError("sparse_basis: need 1 <= r <= n");
  return BasisMatrix::adopt(RealMatrix::Identity(n, r));
}

BasisMatrix random_basis(Index n, Index r, Rng& rng) {
  if (r < 1 || r > n) throw DimensionError("random_basis: need 1 <= r <= n");
  std::normal_distribution<double> normal(0.0, 1.0);
  RealMatrix g(n, r);
  for (Index j = 0; j < r; ++j)
    for (Index i = 0; i < n; ++i) g(i, j) = normal(rng);
  return orthonormal_columns(g);
}

// ---------------------------------------------------------------------------
// Support schedules

namespace {

bool intersects(const IndexSet& a, const IndexSet& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return true;
    if (*i < *j)
      ++i;
    else
      ++j;
  }
  return false;
}

IndexSet set_difference(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::string describe(const IndexSet& set) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < set.size(); ++i) os << (i ? "," : "") << set[i];
  os << '}';
  return os.str();
}

}  // namespace

std::string find_schedule_violation(Index n, const std::vector<IndexSet>& supports, Index s, Index rho,
                                    Index beta_tilde, bool cyclic) {
  if (n < 1) return "ambient dimension must be positive";
  if (s < 0 || rho < 1 || beta_tilde < 1) return "need s >= 0, rho >= 1, beta_tilde >= 1";

  // Distinct sets T^[k] with the number of consecutive instants each persists.
  std::vector<IndexSet> sets;
  std::vector<Index> persist;
  for (std::size_t t = 0; t < supports.size(); ++t) {
    const IndexSet& set = supports[t];
    for (std::size_t i = 0; i < set.size(); ++i) {
      if (set[i] < 0 || set[i] >= n) return "index " + std::to_string(set[i]) + " out of range at t=" + std::to_string(t);
      if (i > 0 && set[i] <= set[i - 1]) return "support at t=" + std::to_string(t) + " not sorted/unique";
    }
    if (static_cast<Index>(set.size()) > s) {
      return "support at t=" + std::to_string(t) + " has size " + std::to_string(set.size()) + " > s";
    }
    if (!sets.empty() && sets.back() == set) {
      ++persist.back();
    } else {
      sets.push_back(set);
      persist.push_back(1);
    }
  }

  for (std::size_t k = 0; k < sets.size(); ++k) {
    if (!sets[k].empty() && persist[k] > beta_tilde) {
      return "set " + describe(sets[k]) + " persists " + std::to_string(persist[k]) +
             " consecutive instants > beta_tilde";
    }
  }

  for (std::size_t k = 0; k + static_cast<std::size_t>(rho) < sets.size(); ++k) {
    if (intersects(sets[k], sets[k + static_cast<std::size_t>(rho)])) {
      return "distinct sets " + std::to_string(k) + " and " + std::to_string(k + static_cast<std::size_t>(rho)) +
             " intersect (rho-lag disjointness)";
    }
  }

  std::vector<Index> owner_pass(static_cast<std::size_t>(n), -1);
  Index pass = 0;
  for (std::size_t k = 0; k + 1 < sets.size(); ++k) {
    if (cyclic && k > 0 && !sets[k].empty() && !sets[k - 1].empty() && sets[k].front() < sets[k - 1].front()) {
      ++pass;
    }
    for (Index i : set_difference(sets[k], sets[k + 1])) {
      auto& owner = owner_pass[static_cast<std::size_t>(i)];
      if (owner == pass) {
        return "index " + std::to_string(i) + " vacated twice (vacated sets must be disjoint)";
      }
      owner = pass;
    }
  }
  return {};
}

SupportSchedule::SupportSchedule(Index n, std::vector<IndexSet> supports, Index s, Index rho,
                                 Index beta_tilde, bool cyclic)
    : n_(n), supports_(std::move(supports)), s_(s), rho_(rho), beta_tilde_(beta_tilde), cyclic_(cyclic) {
  const auto violation = find_schedule_violation(n_, supports_, s_, rho_, beta_tilde_, cyclic_);
  if (!violation.empty()) throw ScheduleError("invalid support schedule: " + violation);
}

IndexSet block_support(Index n, const MotionParams& motion, Index t) {
  if (motion.s < 0 || motion.rho < 1 || motion.beta_tilde < 1 || motion.start < 0 || t < 0) {
    throw ParameterError("motion: need s >= 0, rho >= 1, beta_tilde >= 1, start >= 0");
  }
  if (motion.s > n) throw CapacityError("support size s exceeds n");
  const Index step = (motion.s + motion.rho - 1) / motion.rho;
  Index pos = motion.start + step * (t / motion.beta_tilde);
  if (motion.wrap) {
    pos %= (n - motion.s + 1);
  } else if (pos + motion.s > n) {
    throw CapacityError("moving block leaves the ambient space at frame " + std::to_string(t));
  }
  IndexSet set(static_cast<std::size_t>(motion.s));
  for (Index i = 0; i < motion.s; ++i) set[static_cast<std::size_t>(i)] = pos + i;
  return set;
}

SupportSchedule generate_support_schedule(Index n, Index alpha, Index s, Index rho, Index beta_tilde,
                                          Index start, bool wrap) {
  if (alpha < 1) throw ParameterError("alpha must be positive");
  if (s < 0 || rho < 1 || beta_tilde < 1 || start < 0) {
    throw ParameterError("need s >= 0, rho >= 1, beta_tilde >= 1, start >= 0");
  }
  const Index step = (s + rho - 1) / rho;
  const Index moves = (alpha + beta_tilde - 1) / beta_tilde;
  const Index required = start + s + step * moves;
  if (!wrap && required > n) {
    throw CapacityError("support schedule needs n >= " + std::to_string(required) + ", got n = " +
                        std::to_string(n));
  }
  if (wrap && start + s > n) {
    throw CapacityError("support schedule needs n >= " + std::to_string(start + s) + ", got n = " +
                        std::to_string(n));
  }
  const MotionParams motion{s, rho, beta_tilde, start, wrap};
  std::vector<IndexSet> supports;
  supports.reserve(static_cast<std::size_t>(alpha));
  for (Index t = 0; t < alpha; ++t) supports.push_back(block_support(n, motion, t));
  return SupportSchedule(n, std::move(supports), s, rho, beta_tilde, wrap);
}

void write_schedule(std::ostream& out, const SupportSchedule& schedule) {
  for (const auto& set : schedule.supports()) {
    for (std::size_t i = 0; i < set.size(); ++i) {
      if (i) out << ' ';
      out << set[i];
    }
    out << '\n';
  }
}

std::vector<IndexSet> read_schedule(std::istream& in) {
  std::vector<IndexSet> out;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    IndexSet set;
    long long v = 0;
    while (row >> v) set.push_back(static_cast<Index>(v));
    if (!row.eof()) throw ParseError("schedule: bad entry on line " + std::to_string(out.size() + 1));
    out.push_back(std::move(set));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Observation channels

namespace {

void require_in_range(const IndexSet& support, Index n) {
  for (Index i : support) {
    if (i < 0 || i >= n) throw IndexError("support index " + std::to_string(i) + " outside [0, " + std::to_string(n) + ")");
  }
}

}  // namespace

RealVector apply_missing(const RealVector& ell, const IndexSet& support) {
  require_in_range(support, ell.size());
  RealVector y = ell;
  for (Index i : support) y(i) = 0.0;
  return y;
}

RealVector apply_sddc(const RealVector& ell, const IndexSet& support, const RealMatrix& m_st) {
  require_in_range(support, ell.size());
  if (m_st.rows() != static_cast<Index>(support.size()) || m_st.cols() != ell.size()) {
    throw DimensionError("M_st must be |T| x n = " + std::to_string(support.size()) + "x" +
                         std::to_string(ell.size()));
  }
  RealVector y = ell;
  if (support.empty()) return y;
  const RealVector x = m_st * ell;
  for (std::size_t k = 0; k < support.size(); ++k) y(support[k]) += x(static_cast<Index>(k));
  return y;
}

namespace {

struct Frame {
  RealVector ell;
  RealVector y;
  double q = 0.0;
};

Frame draw_frame(const SignalModel& model, NoiseKind kind, double q_gen, const IndexSet& support, Rng& rng) {
  const RealMatrix& p = model.basis().mat();
  Frame fr;
  fr.ell = p * sample_coefficients(model, rng);
  if (kind == NoiseKind::kMissing) {
    fr.y = apply_missing(fr.ell, support);
    RealMatrix rows(static_cast<Index>(support.size()), p.cols());
    for (std::size_t k = 0; k < support.size(); ++k) rows.row(static_cast<Index>(k)) = p.row(support[k]);
    fr.q = spectral_norm(rows);
  } else {
    RealMatrix m_st = RealMatrix::Zero(static_cast<Index>(support.size()), model.n());
    if (q_gen > 0.0) {
      std::normal_distribution<double> normal(0.0, q_gen);
      for (Index j = 0; j < m_st.cols(); ++j)
        for (Index i = 0; i < m_st.rows(); ++i) m_st(i, j) = normal(rng);
    }
    fr.y = apply_sddc(fr.ell, support, m_st);
    fr.q = spectral_norm(m_st * p);
  }
  return fr;
}

void require_q_gen(double q_gen) {
  if (!(q_gen >= 0.0) || !std::isfinite(q_gen)) throw ParameterError("q_gen must be finite and >= 0");
}

}  // namespace

Dataset generate_dataset(const SignalModel& model, const NoiseModel& noise, Index alpha, Rng& rng) {
  if (alpha < 1) throw ParameterError("alpha must be positive");
  const bool missing = std::holds_alternative<MissingNoise>(noise);
  const SupportSchedule& schedule =
      missing ? std::get<MissingNoise>(noise).schedule : std::get<SddcNoise>(noise).schedule;
  const double q_gen = missing ? 0.0 : std::get<SddcNoise>(noise).q_gen;
  require_q_gen(q_gen);
  if (schedule.n() != model.n()) throw DimensionError("schedule and signal model disagree on n");
  if (schedule.length() < alpha) {
    throw DimensionError("schedule has " + std::to_string(schedule.length()) + " sets, need " +
                         std::to_string(alpha));
  }

  const NoiseKind kind = missing ? NoiseKind::kMissing : NoiseKind::kSddc;
  RealMatrix y(model.n(), alpha);
  RealMatrix l(model.n(), alpha);
  double q = 0.0;
  for (Index t = 0; t < alpha; ++t) {
    Frame fr = draw_frame(model, kind, q_gen, schedule.at(t), rng);
    l.col(t) = fr.ell;
    y.col(t) = fr.y;
    q = std::max(q, fr.q);
  }
  std::vector<IndexSet> used(schedule.supports().begin(), schedule.supports().begin() + alpha);
  SupportSchedule prefix(schedule.n(), std::move(used), schedule.s(), schedule.rho(), schedule.beta_tilde(),
                         schedule.cyclic());
  return {std::move(y), std::move(l), std::move(prefix), q};
}

ObservationStream::ObservationStream(SignalModel model, NoiseKind kind, double q_gen, MotionParams motion, Rng rng)
    : model_(std::move(model)), kind_(kind), q_gen_(q_gen), motion_(motion), rng_(rng) {
  require_q_gen(q_gen_);
  // Fail early on motion parameters that cannot fit.
  (void)block_support(model_.n(), motion_, 0);
}

RealMatrix ObservationStream::next_block(Index alpha) {
  if (alpha < 1) throw ParameterError("block length must be positive");
  RealMatrix y(model_.n(), alpha);
  last_clean_.resize(model_.n(), alpha);
  for (Index c = 0; c < alpha; ++c) {
    IndexSet support;
    try {
      support = block_support(model_.n(), motion_, frame_);
    } catch (const CapacityError& e) {
      throw InsufficientDataError(std::string("observation stream exhausted: ") + e.what());
    }
    Frame fr = draw_frame(model_, kind_, q_gen_, support, rng_);
    last_clean_.col(c) = fr.ell;
    y.col(c) = fr.y;
    q_measured_ = std::max(q_measured_, fr.q);
    ++frame_;
  }
  return y;
}

}  // namespace corpca
