#pragma once

#include <span>
#include <vector>

#include "corpca/block_source.hpp"
#include "corpca/linalg.hpp"

namespace corpca {

struct EvdConfig {
  double thresh = 0.0;  // eigenvalue retention threshold, > 0
};

struct ClusterEvdConfig {
  Index alpha = 0;     // samples per cluster block
  double g_hat = 1.0;  // within-cluster condition number allowance, >= 1
  double thresh = 0.0;
};

struct ClusterEvdResult {
  BasisMatrix p_hat;
  std::vector<Index> cluster_sizes;
  Index vartheta_hat = 0;
  /// Full spectrum of the deflated covariance M_k of every block.
  std::vector<RealVector> per_cluster_eigs;
};

/// Eigenvectors of the empirical covariance whose eigenvalues are strictly
/// above cfg.thresh, in descending order. The rank is not capped.
BasisMatrix simple_evd(const RealMatrix& y, const EvdConfig& cfg);

/// Projector I - G G^T onto the orthogonal complement of an already-detected basis.
RealMatrix deflate(const RealMatrix& g_det, Index n);
RealMatrix deflate(const BasisMatrix& g_det);

struct ClusterDetection {
  Index r_hat = 0;
  bool stop = false;
};

/// Size of the leading cluster of a descending spectrum: extend while
/// eigs[0] / eigs[j] <= g_hat and eigs[j] >= thresh. `stop` is set when the
/// first excluded eigenvalue is below thresh or the spectrum is exhausted.
ClusterDetection detect_cluster(std::span<const double> eigs, double g_hat, double thresh);

/// Cluster-wise EVD with deflation. Block k is projected away from every
/// cluster found so far, its leading cluster is detected, and the matching top
/// eigenvectors are appended; the loop ends on the stop flag.
/// `max_clusters` bounds the loop (0 means n).
ClusterEvdResult cluster_evd(BlockSource& stream, const ClusterEvdConfig& cfg, Index max_clusters = 0);

/// vartheta_hat * alpha.
Index consumed_samples(const ClusterEvdResult& result, const ClusterEvdConfig& cfg);

}  // namespace corpca
