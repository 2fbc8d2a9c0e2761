#include <doctest.h>

#include <cmath>
#include <random>

#include "corpca/linalg.hpp"
#include "test_util.hpp"

using namespace corpca;
using corpca::testing::gaussian;
using corpca::testing::max_abs;
using corpca::testing::random_orthonormal;
using corpca::testing::random_symmetric;

namespace {

RealMatrix basis_of(std::initializer_list<std::initializer_list<double>> cols, Index n) {
  RealMatrix m(n, static_cast<Index>(cols.size()));
  Index j = 0;
  for (const auto& c : cols) {
    Index i = 0;
    for (double v : c) m(i++, j) = v;
    ++j;
  }
  return m;
}

RealVector e(Index n, Index i) { return RealVector::Unit(n, i); }

}  // namespace

TEST_SUITE("sym_eig") {
  TEST_CASE("identity has unit spectrum") {
    const auto eig = sym_eig(RealMatrix::Identity(3, 3));
    CHECK(eig.eigenvalues.isApprox(RealVector::Ones(3)));
    CHECK(orthonormality_defect(eig.eigenvectors.mat()) <= 1e-12);
  }

  TEST_CASE("diagonal input is sorted and signs fixed") {
    RealMatrix m = RealVector(Eigen::Vector3d(2, 5, 1)).asDiagonal();
    const auto eig = sym_eig(m);
    CHECK(eig.eigenvalues(0) == doctest::Approx(5));
    CHECK(eig.eigenvalues(1) == doctest::Approx(2));
    CHECK(eig.eigenvalues(2) == doctest::Approx(1));
    // Largest-magnitude entry positive: exactly the permuted identity.
    RealMatrix expected(3, 3);
    expected << 0, 1, 0, 1, 0, 0, 0, 0, 1;
    CHECK(max_abs(eig.eigenvectors.mat() - expected) <= 1e-15);
  }

  TEST_CASE("recovers a constructed spectrum") {
    std::mt19937_64 rng(11);
    const RealMatrix v = random_orthonormal(8, 8, rng);
    RealVector lambda(8);
    lambda << 9.5, 7.0, 3.25, 1.0, 0.5, -0.75, -2.0, -4.0;
    const RealMatrix m = v * lambda.asDiagonal() * v.transpose();
    const auto eig = sym_eig(m);
    for (Index i = 0; i < 8; ++i) CHECK(std::abs(eig.eigenvalues(i) - lambda(i)) <= 1e-9 * std::abs(lambda(i)));
    const RealMatrix rebuilt = eig.eigenvectors.mat() * eig.eigenvalues.asDiagonal() * eig.eigenvectors.mat().transpose();
    CHECK(spectral_norm(rebuilt - m) <= 1e-9 * std::max(1.0, spectral_norm(m)));
    CHECK(orthonormality_defect(eig.eigenvectors.mat()) <= 1e-10);
  }

  TEST_CASE("sign convention holds on random input") {
    std::mt19937_64 rng(5);
    const auto eig = sym_eig(random_symmetric(12, rng));
    for (Index j = 0; j < 12; ++j) {
      Index arg = 0;
      eig.eigenvectors.mat().col(j).cwiseAbs().maxCoeff(&arg);
      CHECK(eig.eigenvectors.mat()(arg, j) > 0.0);
    }
  }

  TEST_CASE("Weyl: perturbed eigenvalues move by at most ||H||") {
    std::mt19937_64 rng(8);
    for (int it = 0; it < 50; ++it) {
      const RealMatrix a = random_symmetric(10, rng);
      const RealMatrix h = 0.1 * random_symmetric(10, rng);
      const auto ea = sym_eig(a);
      const auto eah = sym_eig(a + h);
      const double hn = spectral_norm(h);
      CHECK(((eah.eigenvalues - ea.eigenvalues).cwiseAbs().maxCoeff()) <= hn + 1e-12);
    }
  }

  TEST_CASE("rejects non-square and asymmetric input") {
    CHECK_THROWS_AS(sym_eig(RealMatrix::Zero(2, 3)), DimensionError);
    RealMatrix m = RealMatrix::Identity(3, 3);
    m(0, 2) = 1e-3;
    CHECK_THROWS_AS(sym_eig(m), SymmetryError);
  }
}

TEST_SUITE("top_eigenvectors") {
  TEST_CASE("diagonal spectrum") {
    RealMatrix m = RealVector(Eigen::Vector3d(3, 2, 1)).asDiagonal();
    const BasisMatrix top = top_eigenvectors(m, 2);
    const BasisMatrix e12(basis_of({{1, 0, 0}, {0, 1, 0}}, 3));
    CHECK(subspace_error(top, e12) == doctest::Approx(0.0));
  }

  TEST_CASE("degenerate spectrum: only subspace-level properties") {
    const RealMatrix m = RealMatrix::Identity(3, 3);
    const BasisMatrix top = top_eigenvectors(m, 2);
    CHECK(top.cols() == 2);
    CHECK(orthonormality_defect(top.mat()) <= 1e-10);
    CHECK(max_abs(m * top.mat() - top.mat()) <= 1e-12);
  }

  TEST_CASE("dominant direction of a rotated spectrum") {
    std::mt19937_64 rng(3);
    const RealMatrix v = random_orthonormal(3, 3, rng);
    const RealMatrix m = v * Eigen::Vector3d(10, 1, 0.1).asDiagonal() * v.transpose();
    const BasisMatrix top = top_eigenvectors(m, 1);
    CHECK(subspace_error(top, BasisMatrix(v.leftCols(1))) <= 1e-9);
  }

  TEST_CASE("r outside [1, n]") {
    CHECK_THROWS_AS(top_eigenvectors(RealMatrix::Identity(3, 3), 4), DimensionError);
    CHECK_THROWS_AS(top_eigenvectors(RealMatrix::Identity(3, 3), 0), DimensionError);
  }
}

TEST_SUITE("subspace_error") {
  TEST_CASE("same subspace") {
    std::mt19937_64 rng(1);
    const BasisMatrix p(random_orthonormal(30, 4, rng));
    CHECK(subspace_error(p, p) <= 1e-12);
  }

  TEST_CASE("orthogonal and 45-degree cases") {
    const BasisMatrix e1(basis_of({{1, 0}}, 2));
    const BasisMatrix e2(basis_of({{0, 1}}, 2));
    CHECK(subspace_error(e1, e2) == doctest::Approx(1.0));
    const double h = 1.0 / std::sqrt(2.0);
    const BasisMatrix diag(basis_of({{h, h}}, 2));
    CHECK(subspace_error(diag, e1) == doctest::Approx(h).epsilon(1e-14));
  }

  TEST_CASE("dimension mismatch") {
    CHECK_THROWS_AS(subspace_error(BasisMatrix(RealMatrix::Identity(3, 1)), BasisMatrix(RealMatrix::Identity(4, 1))),
                    DimensionError);
  }

  TEST_CASE("literal formula is asymmetric for unequal ranks") {
    const BasisMatrix wide(RealMatrix::Identity(4, 2));
    const BasisMatrix narrow(RealMatrix::Identity(4, 1));
    CHECK(subspace_error(wide, narrow) <= 1e-15);
    CHECK(subspace_error(narrow, wide) == doctest::Approx(1.0));
  }

  TEST_CASE("property: symmetric for equal ranks, invariant to in-span rotations") {
    std::mt19937_64 rng(2024);
    for (int it = 0; it < 200; ++it) {
      const Index n = std::uniform_int_distribution<Index>(2, 25)(rng);
      const Index k = std::uniform_int_distribution<Index>(1, n)(rng);
      const BasisMatrix a(random_orthonormal(n, k, rng));
      const BasisMatrix b(random_orthonormal(n, k, rng));
      const double se = subspace_error(a, b);
      CHECK(se >= 0.0);
      CHECK(se <= 1.0);
      CHECK(std::abs(se - subspace_error(b, a)) <= 1e-9);
      const RealMatrix r1 = random_orthonormal(k, k, rng);
      const RealMatrix r2 = random_orthonormal(k, k, rng);
      const double rotated = subspace_error(BasisMatrix(a.mat() * r1), BasisMatrix(b.mat() * r2));
      CHECK(std::abs(rotated - se) <= 1e-10);
    }
  }
}

TEST_SUITE("spectral_norm") {
  TEST_CASE("simple values") {
    RealMatrix d(2, 2);
    d << 3, 0, 0, -4;
    CHECK(spectral_norm(d) == doctest::Approx(4.0));
    CHECK(spectral_norm(RealMatrix::Zero(4, 3)) == 0.0);
  }

  TEST_CASE("rank one outer product") {
    std::mt19937_64 rng(9);
    RealVector u = gaussian(7, 1, rng);
    RealVector v = gaussian(5, 1, rng);
    u *= 2.0 / u.norm();
    v *= 3.0 / v.norm();
    const RealMatrix m = u * v.transpose();
    CHECK(std::abs(spectral_norm(m) - u.norm() * v.norm()) <= 1e-9 * 6.0);
  }

  TEST_CASE("agrees with an SVD") {
    std::mt19937_64 rng(10);
    for (int it = 0; it < 20; ++it) {
      const RealMatrix m = gaussian(9, 4, rng);
      Eigen::JacobiSVD<RealMatrix> svd(m);
      CHECK(std::abs(spectral_norm(m) - svd.singularValues()(0)) <= 1e-9 * svd.singularValues()(0));
    }
  }
}

TEST_SUITE("empirical_covariance") {
  TEST_CASE("single column") {
    const RealMatrix y = RealMatrix::Identity(3, 1);
    CHECK(max_abs(empirical_covariance(y) - y * y.transpose()) == 0.0);
  }

  TEST_CASE("opposite columns average to one outer product") {
    RealVector v(3);
    v << 1, -2, 0.5;
    RealMatrix y(3, 2);
    y << v, -v;
    CHECK(max_abs(empirical_covariance(y) - v * v.transpose()) <= 1e-15);
  }

  TEST_CASE("law of large numbers on a known spectrum") {
    std::mt19937_64 rng(77);
    const Index n = 6, alpha = 10000;
    const RealMatrix basis = random_orthonormal(n, 3, rng);
    const Eigen::Vector3d lambda(4.0, 2.0, 1.0);
    RealMatrix y(n, alpha);
    for (Index t = 0; t < alpha; ++t) {
      Eigen::Vector3d a;
      for (int j = 0; j < 3; ++j) {
        const double w = std::sqrt(3.0 * lambda(j));
        a(j) = std::uniform_real_distribution<double>(-w, w)(rng);
      }
      y.col(t) = basis * a;
    }
    const auto eig = sym_eig(empirical_covariance(y));
    for (int j = 0; j < 3; ++j) CHECK(std::abs(eig.eigenvalues(j) - lambda(j)) <= 0.05 * lambda(j));
    CHECK(std::abs(eig.eigenvalues(3)) <= 1e-10);
  }

  TEST_CASE("empty input") { CHECK_THROWS_AS(empirical_covariance(RealMatrix(3, 0)), DimensionError); }
}

TEST_SUITE("sin_theta_bound") {
  TEST_CASE("formula and gap error") {
    CHECK(sin_theta_bound(1.0, 0.0, 0.0) == 0.0);
    CHECK(sin_theta_bound(1.0, 0.2, 0.4) == doctest::Approx(1.0));
    CHECK_THROWS_AS(sin_theta_bound(1.0, 0.5, 0.6), GapError);
    CHECK_THROWS_AS(sin_theta_bound(1.0, 0.5, 0.5), GapError);
  }
}

TEST_SUITE("BasisMatrix") {
  TEST_CASE("rejects non-orthonormal columns") {
    RealMatrix m(3, 2);
    m << 1, 1, 0, 0, 0, 1e-3;
    CHECK_THROWS_AS(BasisMatrix{m}, BasisError);
    CHECK_THROWS_AS(BasisMatrix{RealMatrix::Identity(2, 3)}, DimensionError);
  }

  TEST_CASE("concat checks cross orthogonality") {
    const BasisMatrix e1(RealMatrix::Identity(3, 1));
    const BasisMatrix e2(RealMatrix(RealMatrix::Identity(3, 3).col(1)));
    CHECK(e1.concat(e2).cols() == 2);
    CHECK_THROWS_AS(e1.concat(e1), BasisError);
  }

  TEST_CASE("orthonormal_columns spans the input") {
    std::mt19937_64 rng(4);
    const RealMatrix g = gaussian(10, 3, rng);
    const BasisMatrix q = orthonormal_columns(g);
    CHECK(orthonormality_defect(q.mat()) <= 1e-12);
    CHECK(max_abs(g - q.mat() * (q.mat().transpose() * g)) <= 1e-12);
  }
}
