#pragma once

#include <Eigen/Dense>

#include "corpca/errors.hpp"

namespace corpca {

using Index = Eigen::Index;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr double kBasisTolerance = 1e-10;

/// max_ij |(Q^T Q - I)_ij|
double orthonormality_defect(const RealMatrix& q);

/// Tall matrix with orthonormal columns. Immutable once built.
///
/// The checked constructor rejects anything whose Gram matrix deviates from the
/// identity by more than `tolerance` in max-norm. `adopt` skips the check and is
/// meant for factors that are orthonormal by construction (eigensolver output,
/// QR factors, column slices of either).
class BasisMatrix {
 public:
  BasisMatrix() = default;
  explicit BasisMatrix(RealMatrix mat, double tolerance = kBasisTolerance);

  static BasisMatrix adopt(RealMatrix mat);
  /// n x 0 basis of the trivial subspace.
  static BasisMatrix empty(Index n);

  const RealMatrix& mat() const noexcept { return mat_; }
  Index rows() const noexcept { return mat_.rows(); }
  Index cols() const noexcept { return mat_.cols(); }
  bool is_empty() const noexcept { return mat_.cols() == 0; }

  /// First k columns.
  BasisMatrix leading(Index k) const;
  /// [this other]; fails when the concatenation is not orthonormal within `tolerance`.
  BasisMatrix concat(const BasisMatrix& other, double tolerance = kBasisTolerance) const;

 private:
  RealMatrix mat_;
};

struct EigenDecomposition {
  RealVector eigenvalues;    // non-increasing
  BasisMatrix eigenvectors;  // column i pairs with eigenvalues(i)
};

/// Full symmetric eigendecomposition, eigenvalues in descending order.
///
/// Each eigenvector is normalised so that its largest-magnitude entry is
/// positive (lowest index wins ties), which makes outputs reproducible
/// bit-for-bit under a fixed input.
EigenDecomposition sym_eig(const RealMatrix& m);

BasisMatrix top_eigenvectors(const RealMatrix& m, Index r);
BasisMatrix top_eigenvectors(const EigenDecomposition& eig, Index r);

/// ||(I - Phat Phat^T) P||, clamped to [0, 1].
double subspace_error(const BasisMatrix& p_hat, const BasisMatrix& p);

/// Largest singular value.
double spectral_norm(const RealMatrix& m);

/// (1/alpha) * sum_t y_t y_t^T over the columns of y.
RealMatrix empirical_covariance(const RealMatrix& y);

/// ||H|| / (lambda_min(A) - lambda_max(A_perp) - ||H||); throws GapError when
/// the denominator is not strictly positive.
double sin_theta_bound(double lambda_min_a, double lambda_max_a_perp, double h_norm);

/// Orthonormal basis for the column span of a full-column-rank matrix (thin QR).
BasisMatrix orthonormal_columns(const RealMatrix& m);

/// Throws SymmetryError unless m is square and symmetric to within
/// 1e-10 relative to its largest entry.
void require_symmetric(const RealMatrix& m, const char* what);

void require_finite(const RealMatrix& m, const char* what);

}  // namespace corpca
