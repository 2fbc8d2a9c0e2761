#pragma once

#include <random>

#include "corpca/linalg.hpp"

namespace corpca::testing {

inline RealMatrix gaussian(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  RealMatrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  return m;
}

/// Orthonormal n x k from the Q factor of a seeded Gaussian matrix.
inline RealMatrix random_orthonormal(Index n, Index k, std::mt19937_64& rng) {
  Eigen::HouseholderQR<RealMatrix> qr(gaussian(n, k, rng));
  return qr.householderQ() * RealMatrix::Identity(n, k);
}

inline RealMatrix random_symmetric(Index n, std::mt19937_64& rng) {
  const RealMatrix g = gaussian(n, n, rng);
  return 0.5 * (g + g.transpose());
}

inline double max_abs(const RealMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace corpca::testing
