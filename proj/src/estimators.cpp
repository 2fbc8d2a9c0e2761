#include "corpca/estimators.hpp"

#include <cmath>
#include <string>

namespace corpca {

namespace {

void require_thresh(double thresh) {
  if (!(thresh > 0.0) || !std::isfinite(thresh)) throw ParameterError("thresh must be finite and > 0");
}

/// Leading eigenpairs of z z^T / alpha, eigenvalues descending and padded with
/// zeros to length n. When alpha < n the alpha x alpha Gram matrix is
/// diagonalised instead and its eigenvectors mapped back through z.
struct CovarianceSpectrum {
  RealVector values;   // length n
  RealMatrix vectors;  // n x min(n, alpha), paired with the leading values
};

CovarianceSpectrum covariance_spectrum(const RealMatrix& z) {
  const Index n = z.rows();
  const Index alpha = z.cols();
  if (alpha >= n) {
    EigenDecomposition eig = sym_eig(empirical_covariance(z));
    return {std::move(eig.eigenvalues), eig.eigenvectors.mat()};
  }
  require_finite(z, "data matrix");
  const double inv_alpha = 1.0 / static_cast<double>(alpha);
  RealMatrix gram = RealMatrix::Zero(alpha, alpha);
  gram.selfadjointView<Eigen::Lower>().rankUpdate(z.transpose(), inv_alpha);
  gram.triangularView<Eigen::StrictlyUpper>() = gram.transpose();
  const EigenDecomposition small = sym_eig(gram);

  CovarianceSpectrum out;
  out.values = RealVector::Zero(n);
  // PSD by construction; clamping roundoff keeps the zero padding in order.
  out.values.head(alpha) = small.eigenvalues.cwiseMax(0.0);
  out.vectors = z * small.eigenvectors.mat();
  for (Index j = 0; j < alpha; ++j) {
    auto col = out.vectors.col(j);
    const double norm = col.norm();
    if (norm > 0.0) col /= norm;
    Index arg = 0;
    for (Index i = 1; i < n; ++i) {
      if (std::abs(col(i)) > std::abs(col(arg))) arg = i;
    }
    if (col(arg) < 0.0) col = -col;
  }
  return out;
}

}  // namespace

BasisMatrix simple_evd(const RealMatrix& y, const EvdConfig& cfg) {
  require_thresh(cfg.thresh);
  if (y.cols() < 1 || y.rows() < 1) throw DimensionError("simple_evd: empty data matrix");
  const CovarianceSpectrum spec = covariance_spectrum(y);
  Index keep = 0;
  while (keep < spec.vectors.cols() && spec.values(keep) > cfg.thresh) ++keep;
  if (keep == 0) {
    throw EmptySubspaceError("simple_evd: largest eigenvalue " + std::to_string(spec.values(0)) +
                             " is not above thresh " + std::to_string(cfg.thresh));
  }
  return BasisMatrix::adopt(spec.vectors.leftCols(keep));
}

RealMatrix deflate(const RealMatrix& g_det, Index n) {
  if (g_det.cols() == 0) return RealMatrix::Identity(n, n);
  if (g_det.rows() != n) throw DimensionError("deflate: basis has wrong row count");
  const double defect = orthonormality_defect(g_det);
  if (defect > 1e-8) throw BasisError("deflate: detected basis is not orthonormal (" + std::to_string(defect) + ")");
  RealMatrix psi = RealMatrix::Identity(n, n);
  psi.noalias() -= g_det * g_det.transpose();
  return psi;
}

RealMatrix deflate(const BasisMatrix& g_det) { return deflate(g_det.mat(), g_det.rows()); }

ClusterDetection detect_cluster(std::span<const double> eigs, double g_hat, double thresh) {
  if (eigs.empty()) throw DimensionError("detect_cluster: empty spectrum");
  if (!(g_hat >= 1.0)) throw ParameterError("g_hat must be >= 1");
  require_thresh(thresh);
  for (std::size_t i = 1; i < eigs.size(); ++i) {
    if (eigs[i] > eigs[i - 1]) throw OrderError("detect_cluster: spectrum not non-increasing");
  }
  if (eigs[0] < thresh) {
    throw NoClusterError("leading eigenvalue " + std::to_string(eigs[0]) + " is below thresh " +
                         std::to_string(thresh));
  }
  const std::size_t n = eigs.size();
  std::size_t r = 1;
  while (r < n && eigs[r] >= thresh && eigs[0] / eigs[r] <= g_hat) ++r;
  return {static_cast<Index>(r), r == n || eigs[r] < thresh};
}

ClusterEvdResult cluster_evd(BlockSource& stream, const ClusterEvdConfig& cfg, Index max_clusters) {
  if (cfg.alpha < 1) throw ParameterError("cluster_evd: alpha must be >= 1");
  if (!(cfg.g_hat >= 1.0)) throw ParameterError("cluster_evd: g_hat must be >= 1");
  require_thresh(cfg.thresh);

  ClusterEvdResult result;
  RealMatrix detected;  // G_det, n x (sum of r_hat)
  Index n = -1;
  for (Index k = 0;; ++k) {
    if (n > 0 && k >= max_clusters) {
      throw NonTerminationError("cluster_evd: no stop after " + std::to_string(max_clusters) + " clusters");
    }
    const RealMatrix block = stream.next_block(cfg.alpha);
    if (n < 0) {
      n = block.rows();
      if (max_clusters <= 0) max_clusters = n;
      detected.resize(n, 0);
    } else if (block.rows() != n) {
      throw DimensionError("cluster_evd: block row count changed");
    }

    // Psi (1/alpha) sum y y^T Psi = (1/alpha) sum (Psi y)(Psi y)^T.
    RealMatrix projected = block;
    if (detected.cols() > 0) projected.noalias() -= detected * (detected.transpose() * block);
    CovarianceSpectrum spec = covariance_spectrum(projected);
    const auto det = detect_cluster(std::span<const double>(spec.values.data(), spec.values.size()),
                                    cfg.g_hat, cfg.thresh);
    if (det.r_hat > spec.vectors.cols()) throw Error("cluster_evd: cluster larger than the block rank");

    RealMatrix joined(n, detected.cols() + det.r_hat);
    joined << detected, spec.vectors.leftCols(det.r_hat);
    detected = std::move(joined);
    result.cluster_sizes.push_back(det.r_hat);
    result.per_cluster_eigs.push_back(std::move(spec.values));
    if (det.stop) break;
  }
  result.vartheta_hat = static_cast<Index>(result.cluster_sizes.size());
  result.p_hat = BasisMatrix(std::move(detected), 1e-8);
  return result;
}

Index consumed_samples(const ClusterEvdResult& result, const ClusterEvdConfig& cfg) {
  return result.vartheta_hat * cfg.alpha;
}

}  // namespace corpca
