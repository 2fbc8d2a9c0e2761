#include "corpca/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace corpca {

double orthonormality_defect(const RealMatrix& q) {
  if (q.cols() == 0) return 0.0;
  const RealMatrix gram = q.transpose() * q;
  return (gram - RealMatrix::Identity(q.cols(), q.cols())).cwiseAbs().maxCoeff();
}

BasisMatrix::BasisMatrix(RealMatrix mat, double tolerance) : mat_(std::move(mat)) {
  if (mat_.cols() > mat_.rows()) {
    throw DimensionError("basis matrix has more columns (" + std::to_string(mat_.cols()) +
                         ") than rows (" + std::to_string(mat_.rows()) + ")");
  }
  require_finite(mat_, "basis matrix");
  const double defect = orthonormality_defect(mat_);
  if (defect > tolerance) {
    throw BasisError("columns are not orthonormal: max |Q^T Q - I| = " + std::to_string(defect));
  }
}

BasisMatrix BasisMatrix::adopt(RealMatrix mat) {
  BasisMatrix b;
  b.mat_ = std::move(mat);
  return b;
}

BasisMatrix BasisMatrix::empty(Index n) { return adopt(RealMatrix(n, 0)); }

BasisMatrix BasisMatrix::leading(Index k) const {
  if (k < 0 || k > cols()) throw DimensionError("leading: k out of range");
  return adopt(mat_.leftCols(k));
}

BasisMatrix BasisMatrix::concat(const BasisMatrix& other, double tolerance) const {
  if (other.rows() != rows()) throw DimensionError("concat: row counts differ");
  RealMatrix joined(rows(), cols() + other.cols());
  joined << mat_, other.mat_;
  return BasisMatrix(std::move(joined), tolerance);
}

void require_finite(const RealMatrix& m, const char* what) {
  if (!m.allFinite()) throw Error(std::string(what) + " has non-finite entries");
}

void require_symmetric(const RealMatrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw DimensionError(std::string(what) + " is not square (" + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + ")");
  }
  require_finite(m, what);
  if (m.size() == 0) return;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * scale) {
    throw SymmetryError(std::string(what) + " is not symmetric (max |M - M^T| = " +
                        std::to_string(asym) + ")");
  }
}

EigenDecomposition sym_eig(const RealMatrix& m) {
  require_symmetric(m, "sym_eig input");
  const Index n = m.rows();
  if (n == 0) throw DimensionError("sym_eig: empty matrix");

  const RealMatrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(sym, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw Error("sym_eig: eigensolver did not converge");

  // Eigen returns ascending order.
  RealVector values = solver.eigenvalues().reverse();
  RealMatrix vectors = solver.eigenvectors().rowwise().reverse();

  for (Index j = 0; j < n; ++j) {
    auto col = vectors.col(j);
    Index arg = 0;
    double best = std::abs(col(0));
    for (Index i = 1; i < n; ++i) {
      if (std::abs(col(i)) > best) {
        best = std::abs(col(i));
        arg = i;
      }
    }
    if (col(arg) < 0.0) col = -col;
  }
  return {std::move(values), BasisMatrix::adopt(std::move(vectors))};
}

BasisMatrix top_eigenvectors(const EigenDecomposition& eig, Index r) {
  const Index n = eig.eigenvectors.rows();
  if (r < 1 || r > n) {
    throw DimensionError("top_eigenvectors: r = " + std::to_string(r) + " outside [1, " +
                         std::to_string(n) + "]");
  }
  return eig.eigenvectors.leading(r);
}

BasisMatrix top_eigenvectors(const RealMatrix& m, Index r) {
  if (r < 1 || r > m.rows()) {
    throw DimensionError("top_eigenvectors: r = " + std::to_string(r) + " outside [1, " +
                         std::to_string(m.rows()) + "]");
  }
  return top_eigenvectors(sym_eig(m), r);
}

double spectral_norm(const RealMatrix& m) {
  if (m.size() == 0) return 0.0;
  // Eigenvalues of the smaller Gram matrix are the squared singular values.
  const RealMatrix gram = m.rows() <= m.cols() ? RealMatrix(m * m.transpose())
                                               : RealMatrix(m.transpose() * m);
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(gram, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, solver.eigenvalues().maxCoeff()));
}

double subspace_error(const BasisMatrix& p_hat, const BasisMatrix& p) {
  if (p_hat.rows() != p.rows()) {
    throw DimensionError("subspace_error: row counts differ (" + std::to_string(p_hat.rows()) +
                         " vs " + std::to_string(p.rows()) + ")");
  }
  const RealMatrix residual = p.mat() - p_hat.mat() * (p_hat.mat().transpose() * p.mat());
  return std::clamp(spectral_norm(residual), 0.0, 1.0);
}

RealMatrix empirical_covariance(const RealMatrix& y) {
  if (y.cols() < 1 || y.rows() < 1) throw DimensionError("empirical_covariance: empty data matrix");
  require_finite(y, "data matrix");
  RealMatrix cov = RealMatrix::Zero(y.rows(), y.rows());
  cov.selfadjointView<Eigen::Lower>().rankUpdate(y, 1.0 / static_cast<double>(y.cols()));
  cov.triangularView<Eigen::StrictlyUpper>() = cov.transpose();
  return cov;
}

double sin_theta_bound(double lambda_min_a, double lambda_max_a_perp, double h_norm) {
  if (h_norm < 0.0) throw ParameterError("sin_theta_bound: negative perturbation norm");
  const double denom = lambda_min_a - lambda_max_a_perp - h_norm;
  if (!(denom > 0.0)) {
    throw GapError("sin_theta_bound: gap minus perturbation is " + std::to_string(denom));
  }
  return h_norm / denom;
}

BasisMatrix orthonormal_columns(const RealMatrix& m) {
  if (m.cols() > m.rows()) throw DimensionError("orthonormal_columns: more columns than rows");
  Eigen::HouseholderQR<RealMatrix> qr(m);
  RealMatrix q = qr.householderQ() * RealMatrix::Identity(m.rows(), m.cols());
  return BasisMatrix::adopt(std::move(q));
}

}  // namespace corpca
