#pragma once

#include <optional>
#include <span>
#include <vector>

#include "corpca/linalg.hpp"

namespace corpca {

/// One cluster of consecutive eigenvalue indices, 0-based half-open [begin, end).
struct Cluster {
  Index begin = 0;
  Index end = 0;
  double lambda_max = 0.0;  // eigenvalue at begin
  double lambda_min = 0.0;  // eigenvalue at end - 1

  Index size() const noexcept { return end - begin; }
  bool operator==(const Cluster&) const = default;
};

/// Ordered, contiguous, disjoint clusters covering the positive part of a
/// non-increasing spectrum.
struct ClusterPartition {
  std::vector<Cluster> clusters;

  Index vartheta() const noexcept { return static_cast<Index>(clusters.size()); }
  /// Number of eigenvalues covered.
  Index covered() const noexcept { return clusters.empty() ? 0 : clusters.back().end; }
  std::vector<Index> sizes() const;

  /// Rebuilds a partition from cluster sizes; extremes are read off `eigenvalues`.
  static ClusterPartition from_sizes(std::span<const Index> sizes, std::span<const double> eigenvalues);

  bool operator==(const ClusterPartition&) const = default;
};

struct ClusterStats {
  Index vartheta = 0;
  double g_eff = 1.0;  // max_k lambda_k^+ / lambda_k^-
  double chi = 0.0;    // max_k lambda_{k+1}^+ / lambda_k^-, 0 for a single cluster
  double f = 1.0;      // lambda_1 / last positive eigenvalue
};

/// Greedy g-condition-number partition. A cluster starting at index i extends
/// over j while lambda_i / lambda_j <= g (ties extend) and stops at the first
/// violation or the first non-positive eigenvalue.
ClusterPartition g_partition(std::span<const double> eigenvalues, double g);

ClusterStats partition_stats(const ClusterPartition& partition, std::span<const double> eigenvalues);

struct ClusteringCheck {
  bool holds = false;
  std::optional<double> witness_g;
  std::optional<ClusterStats> stats;
  std::optional<ClusterPartition> partition;
};

/// Looks for a g in [1, g_plus] whose partition has chi <= chi_plus. The
/// partition only changes at pairwise eigenvalue ratios, so those ratios are
/// the complete candidate set; they are tried in increasing order.
ClusteringCheck check_clustering(std::span<const double> eigenvalues, double g_plus, double chi_plus);

/// Number of leading strictly positive entries.
Index positive_prefix(std::span<const double> eigenvalues);

}  // namespace corpca
