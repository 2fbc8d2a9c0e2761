#pragma once

#include <iosfwd>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "corpca/block_source.hpp"
#include "corpca/linalg.hpp"

namespace corpca {

using Rng = std::mt19937_64;

/// Sorted, duplicate-free 0-based indices.
using IndexSet = std::vector<Index>;

enum class CoefficientLaw {
  kUniform,  // iid uniform on [-sqrt(3 lambda_j), sqrt(3 lambda_j)], eta = 3
};

/// Ground truth: l_t = P a_t with independent zero-mean bounded coefficients of
/// variance Lambda_j.
class SignalModel {
 public:
  SignalModel(BasisMatrix basis, std::vector<double> lambda,
              CoefficientLaw law = CoefficientLaw::kUniform);

  const BasisMatrix& basis() const noexcept { return basis_; }
  const std::vector<double>& lambda() const noexcept { return lambda_; }
  CoefficientLaw law() const noexcept { return law_; }
  Index n() const noexcept { return basis_.rows(); }
  Index r() const noexcept { return basis_.cols(); }
  /// Pathwise bound: (a_t)_j^2 <= eta * lambda_j.
  double eta() const noexcept;
  /// lambda_max / lambda_min.
  double f() const noexcept { return lambda_.front() / lambda_.back(); }

 private:
  BasisMatrix basis_;
  std::vector<double> lambda_;
  CoefficientLaw law_;
};

RealVector sample_coefficients(const SignalModel& model, Rng& rng);

/// First r columns of the n x n identity.
BasisMatrix sparse_basis(Index n, Index r);
/// Orthonormalised iid Gaussian n x r matrix.
BasisMatrix random_basis(Index n, Index r, Rng& rng);

/// Time sequence of support sets T_1..T_alpha together with the parameters of
/// the moving-support model: |T_t| <= s; each distinct set persists at most
/// beta_tilde consecutive instants; the k-th and (k+rho)-th distinct sets are
/// disjoint; and the sets vacated at successive changes never overlap.
///
/// A cyclic schedule (a support that wraps back to the start of the ambient
/// space) only has the last condition enforced within each pass.
class SupportSchedule {
 public:
  SupportSchedule(Index n, std::vector<IndexSet> supports, Index s, Index rho, Index beta_tilde,
                  bool cyclic = false);

  Index n() const noexcept { return n_; }
  Index length() const noexcept { return static_cast<Index>(supports_.size()); }
  const IndexSet& at(Index t) const { return supports_.at(static_cast<std::size_t>(t)); }
  const std::vector<IndexSet>& supports() const noexcept { return supports_; }
  Index s() const noexcept { return s_; }
  Index rho() const noexcept { return rho_; }
  Index beta_tilde() const noexcept { return beta_tilde_; }
  bool cyclic() const noexcept { return cyclic_; }
  /// rho^2 * beta_tilde.
  Index beta() const noexcept { return rho_ * rho_ * beta_tilde_; }

 private:
  Index n_;
  std::vector<IndexSet> supports_;
  Index s_, rho_, beta_tilde_;
  bool cyclic_;
};

/// Empty string when the sequence satisfies the three support-change
/// conditions, otherwise a description of the first violation found.
std::string find_schedule_violation(Index n, const std::vector<IndexSet>& supports, Index s, Index rho,
                                    Index beta_tilde, bool cyclic = false);

/// Constant-velocity block: T_t = {p_t, ..., p_t + s - 1} with
/// p_t = start + ceil(s/rho) * floor(t / beta_tilde).
struct MotionParams {
  Index s = 0;
  Index rho = 1;
  Index beta_tilde = 1;
  Index start = 0;
  /// Re-enter from index 0 instead of failing when the block reaches the end.
  bool wrap = false;
};

/// Support of the moving block at 0-based frame t.
IndexSet block_support(Index n, const MotionParams& motion, Index t);

/// Throws CapacityError unless start + s + ceil(s/rho) * ceil(alpha/beta_tilde) <= n
/// (strict mode), and validates the result.
SupportSchedule generate_support_schedule(Index n, Index alpha, Index s, Index rho, Index beta_tilde,
                                          Index start = 0, bool wrap = false);

void write_schedule(std::ostream& out, const SupportSchedule& schedule);
std::vector<IndexSet> read_schedule(std::istream& in);

/// y = l with the entries on T zeroed.
RealVector apply_missing(const RealVector& ell, const IndexSet& support);
/// y = l + I_T (M_st l), M_st is |T| x n.
RealVector apply_sddc(const RealVector& ell, const IndexSet& support, const RealMatrix& m_st);

struct MissingNoise {
  SupportSchedule schedule;
};

/// Sparse data-dependent corruption with iid N(0, q_gen^2) entries in M_{s,t}.
struct SddcNoise {
  double q_gen = 0.0;
  SupportSchedule schedule;
};

using NoiseModel = std::variant<MissingNoise, SddcNoise>;

struct Dataset {
  RealMatrix y;
  RealMatrix l;
  SupportSchedule schedule;
  /// max_t ||M_{1,t} P||: ||I_T^T P|| for missing data, ||M_{s,t} P|| for SDDC.
  double q_measured = 0.0;
};

/// alpha frames of y_t = l_t + w_t; uses the first alpha sets of the noise schedule.
Dataset generate_dataset(const SignalModel& model, const NoiseModel& noise, Index alpha, Rng& rng);

enum class NoiseKind { kMissing, kSddc };

/// Unbounded frame generator: draws l_t and the corrupted y_t frame by frame
/// with the moving-block support, so estimators can pull as many blocks as they
/// need. Two streams built from equal arguments produce identical frames.
class ObservationStream final : public BlockSource {
 public:
  ObservationStream(SignalModel model, NoiseKind kind, double q_gen, MotionParams motion, Rng rng);

  RealMatrix next_block(Index alpha) override;
  Index consumed() const override { return frame_; }

  /// Largest ||M_{1,t} P|| over the frames drawn so far.
  double q_measured() const noexcept { return q_measured_; }
  /// Clean columns l_t of the most recent block.
  const RealMatrix& last_clean_block() const noexcept { return last_clean_; }

 private:
  SignalModel model_;
  NoiseKind kind_;
  double q_gen_;
  MotionParams motion_;
  Rng rng_;
  Index frame_ = 0;
  double q_measured_ = 0.0;
  RealMatrix last_clean_;
};

}  // namespace corpca
