#include "corpca/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace corpca {

namespace {

void require_non_increasing(std::span<const double> eigenvalues) {
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
    if (!std::isfinite(eigenvalues[i])) throw ParameterError("eigenvalues must be finite");
    if (i > 0 && eigenvalues[i] > eigenvalues[i - 1]) {
      throw OrderError("eigenvalues not sorted non-increasing at index " + std::to_string(i));
    }
  }
}

}  // namespace

Index positive_prefix(std::span<const double> eigenvalues) {
  Index n = 0;
  while (n < static_cast<Index>(eigenvalues.size()) && eigenvalues[n] > 0.0) ++n;
  return n;
}

std::vector<Index> ClusterPartition::sizes() const {
  std::vector<Index> out;
  out.reserve(clusters.size());
  for (const auto& c : clusters) out.push_back(c.size());
  return out;
}

ClusterPartition ClusterPartition::from_sizes(std::span<const Index> sizes,
                                              std::span<const double> eigenvalues) {
  ClusterPartition p;
  Index pos = 0;
  for (Index s : sizes) {
    if (s < 1) throw ConsistencyError("cluster sizes must be positive");
    if (pos + s > static_cast<Index>(eigenvalues.size())) {
      throw ConsistencyError("cluster sizes exceed the number of eigenvalues");
    }
    p.clusters.push_back({pos, pos + s, eigenvalues[pos], eigenvalues[pos + s - 1]});
    pos += s;
  }
  return p;
}

ClusterPartition g_partition(std::span<const double> eigenvalues, double g) {
  if (!(g >= 1.0)) throw ParameterError("g must be >= 1");
  require_non_increasing(eigenvalues);
  const Index nonzero = positive_prefix(eigenvalues);
  if (nonzero == 0) throw ParameterError("g_partition: no positive eigenvalues");

  ClusterPartition p;
  Index start = 0;
  while (start < nonzero) {
    Index end = start + 1;
    while (end < nonzero && eigenvalues[start] / eigenvalues[end] <= g) ++end;
    p.clusters.push_back({start, end, eigenvalues[start], eigenvalues[end - 1]});
    start = end;
  }
  return p;
}

ClusterStats partition_stats(const ClusterPartition& partition, std::span<const double> eigenvalues) {
  require_non_increasing(eigenvalues);
  const Index nonzero = positive_prefix(eigenvalues);
  if (partition.clusters.empty()) throw ConsistencyError("empty partition");

  Index expected = 0;
  for (const auto& c : partition.clusters) {
    if (c.begin != expected || c.end <= c.begin) {
      throw ConsistencyError("clusters must be contiguous, non-empty and ordered");
    }
    if (c.end > nonzero) throw ConsistencyError("cluster covers a non-positive eigenvalue");
    if (c.lambda_max != eigenvalues[c.begin] || c.lambda_min != eigenvalues[c.end - 1]) {
      throw ConsistencyError("cluster extremes disagree with the eigenvalues");
    }
    expected = c.end;
  }
  if (expected != nonzero) throw ConsistencyError("partition does not cover every positive eigenvalue");

  ClusterStats s;
  s.vartheta = partition.vartheta();
  s.f = eigenvalues.front() / eigenvalues[nonzero - 1];
  s.g_eff = 1.0;
  s.chi = 0.0;
  const auto& cs = partition.clusters;
  for (std::size_t k = 0; k < cs.size(); ++k) {
    s.g_eff = std::max(s.g_eff, cs[k].lambda_max / cs[k].lambda_min);
    if (k + 1 < cs.size()) s.chi = std::max(s.chi, cs[k + 1].lambda_max / cs[k].lambda_min);
  }
  return s;
}

ClusteringCheck check_clustering(std::span<const double> eigenvalues, double g_plus, double chi_plus) {
  if (!(g_plus >= 1.0)) throw ParameterError("g_plus must be >= 1");
  if (!(chi_plus >= 0.0)) throw ParameterError("chi_plus must be >= 0");
  require_non_increasing(eigenvalues);
  const Index nonzero = positive_prefix(eigenvalues);
  if (nonzero == 0) throw ParameterError("check_clustering: no positive eigenvalues");

  std::vector<double> candidates;
  for (Index i = 0; i < nonzero; ++i) {
    for (Index j = i; j < nonzero; ++j) {
      const double ratio = eigenvalues[i] / eigenvalues[j];
      if (ratio <= g_plus) candidates.push_back(ratio);
    }
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  for (double g : candidates) {
    auto partition = g_partition(eigenvalues, g);
    const auto stats = partition_stats(partition, eigenvalues);
    if (stats.chi <= chi_plus) {
      return {true, g, stats, std::move(partition)};
    }
  }
  return {};
}

}  // namespace corpca
