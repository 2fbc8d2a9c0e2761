#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "corpca/datagen.hpp"
#include "corpca/theory.hpp"
#include "test_util.hpp"

using namespace corpca;

namespace {

// Reference values from tests/oracles/bound_formulas.py.
constexpr double kAlpha0Simple = 4.9219696139503747e+19;
constexpr double kBetaSimple = 5.9762195121951226e-06;
constexpr double kAlpha0Cluster = 1.9887504843802765e+22;
constexpr double kBetaCluster = 3.8946224546497563e-10;
constexpr double kWorkedCluster = 0.0010570799457994583;
constexpr double kWorkedSimple = 5.9762195121951226e-06;

BoundInputs simple_inputs() {
  BoundInputs in;
  in.n = 500;
  in.r = 5;
  in.f = 1000;
  in.q = 0.01;
  in.eta = 3;
  in.zeta = 0.002;
  return in;
}

BoundInputs cluster_inputs() {
  BoundInputs in = simple_inputs();
  in.zeta = 4e-7;
  in.g_plus = 1;
  in.chi_plus = 0.001;
  in.vartheta = 2;
  in.r_k = 2;
  return in;
}

bool rel_close(double a, double b, double tol = 1e-13) { return std::abs(a - b) <= tol * std::abs(b); }

}  // namespace

TEST_SUITE("calculators") {
  TEST_CASE("reference values") {
    CHECK(rel_close(alpha0_simple(simple_inputs()), kAlpha0Simple));
    BoundInputs b = simple_inputs();
    b.f = 100;
    CHECK(rel_close(beta_frac_simple(b), kBetaSimple));
    CHECK(rel_close(alpha0_cluster(cluster_inputs()), kAlpha0Cluster));
    CHECK(rel_close(beta_frac_cluster(cluster_inputs()), kBetaCluster));
  }

  TEST_CASE("clustered bound is looser than the simple one") {
    BoundInputs c;
    c.n = 500;
    c.r = 10;
    c.r_k = 5;
    c.f = 100;
    c.q = 0.01;
    c.zeta = 0.001;
    c.g_plus = 3;
    c.chi_plus = 0.2;
    c.vartheta = 2;
    const double cluster = beta_frac_cluster(c);
    const double simple = beta_frac_simple(c);
    CHECK(rel_close(cluster, kWorkedCluster));
    CHECK(rel_close(simple, kWorkedSimple));
    CHECK(cluster > simple);
  }

  TEST_CASE("scaling and degenerate q") {
    BoundInputs in = simple_inputs();
    const double base = alpha0_simple(in);
    in.f *= 2;
    CHECK(rel_close(alpha0_simple(in), 4 * base, 1e-14));
    in = simple_inputs();
    in.q = 0;
    const double at_zero = alpha0_simple(in);
    CHECK(rel_close(at_zero, base));  // q <= 1: max is f either way
    CHECK(beta_frac_simple(in) == std::numeric_limits<double>::infinity());
  }

  TEST_CASE("small q makes g the dominant term") {
    BoundInputs in = cluster_inputs();
    in.g_plus = 2;
    in.chi_plus = 0.0;
    const double with_g = alpha0_cluster(in);
    const double r = 5, rz = r * in.zeta;
    const double expected = 32.0 * 16.0 / 1e-4 * 9 * r * r * (11 * std::log(500.0) + std::log(2.0)) / (rz * rz) * 4;
    CHECK(rel_close(with_g, expected, 1e-12));
  }

  TEST_CASE("one cluster with g = f matches the simple form up to 16") {
    BoundInputs in = cluster_inputs();
    in.f = 20;
    in.g_plus = 20;
    in.vartheta = 1;
    in.chi_plus = 0.0;
    in.q = 0.001;
    CHECK(rel_close(alpha0_cluster(in), 16 * alpha0_simple(in), 1e-12));
  }

  TEST_CASE("beta bounds agree when the cluster collapses to the whole spectrum") {
    BoundInputs in = simple_inputs();
    in.f = 100;
    in.g_plus = 100;
    in.chi_plus = 0.0;
    in.r_k = in.r;
    CHECK(rel_close(beta_frac_cluster(in), beta_frac_simple(in), 1e-14));
  }

  TEST_CASE("monotonicity sweeps") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int it = 0; it < 500; ++it) {
      BoundInputs in;
      in.n = 10 + static_cast<Index>(u(rng) * 1000);
      in.r = 1 + static_cast<Index>(u(rng) * 10);
      in.f = 1 + u(rng) * 50;
      in.q = u(rng) * 0.5;
      in.eta = 1 + u(rng) * 3;
      in.zeta = 0.01 / static_cast<double>(in.r) * (0.1 + 0.9 * u(rng));
      const double a = alpha0_simple(in);
      auto bumped = [&](auto mutate) {
        BoundInputs b = in;
        mutate(b);
        return alpha0_simple(b);
      };
      CHECK(bumped([](BoundInputs& b) { b.n += 10; }) >= a);
      CHECK(bumped([](BoundInputs& b) { b.f *= 1.5; }) >= a);
      CHECK(bumped([](BoundInputs& b) { b.eta *= 1.2; }) >= a);
      CHECK(bumped([](BoundInputs& b) { b.q *= 1.5; }) >= a);
      CHECK(bumped([](BoundInputs& b) { b.zeta *= 0.5; }) >= a);

      BoundInputs c = in;
      c.zeta = std::min(1e-4, 0.01 / c.f) / static_cast<double>(c.r * c.r) * (0.1 + 0.9 * u(rng));
      c.g_plus = 1 + u(rng) * 5;
      c.vartheta = 1 + static_cast<Index>(u(rng) * 4);
      c.chi_plus = 0.0;
      const double ac = alpha0_cluster(c);
      BoundInputs c2 = c;
      c2.n *= 2;
      CHECK(alpha0_cluster(c2) >= ac);
      c2 = c;
      c2.q *= 1.5;
      CHECK(alpha0_cluster(c2) >= ac);
      c2 = c;
      c2.zeta *= 0.5;
      CHECK(alpha0_cluster(c2) >= ac);
      c2 = c;
      c2.f = std::min(c.f * 1.5, 0.01 / (static_cast<double>(c.r * c.r) * c.zeta));
      CHECK(alpha0_cluster(c2) >= ac);

      if (in.q > 0) {
        const double b0 = beta_frac_simple(in);
        BoundInputs b1 = in;
        b1.q *= 1.1;
        CHECK(beta_frac_simple(b1) < b0);
        if (in.q * in.f >= 0.01) CHECK(b0 < 1.0);
      }
    }
  }

  TEST_CASE("invariant violations name the condition") {
    BoundInputs in = simple_inputs();
    in.zeta = 0.01;
    CHECK_THROWS_WITH_AS(alpha0_simple(in), doctest::Contains("r * zeta"), ParameterError);
    in = cluster_inputs();
    in.zeta = 1e-5;
    CHECK_THROWS_WITH_AS(alpha0_cluster(in), doctest::Contains("r^2 * zeta"), ParameterError);
    in = cluster_inputs();
    in.chi_plus = 0.7;
    CHECK_THROWS_AS(alpha0_cluster(in), ParameterError);
    in = cluster_inputs();
    in.chi_plus = 1.0;
    CHECK_THROWS_AS(beta_frac_cluster(in), ParameterError);
  }

  TEST_CASE("guarantee parameters") {
    const auto tp = guarantee_parameters(1.0, 0.1);
    CHECK(tp.g_hat == doctest::Approx(1.0101));
    CHECK(tp.thresh == doctest::Approx(0.095));
  }
}

TEST_SUITE("verify_m2_bound") {
  TEST_CASE("disjoint supports with identity blocks") {
    const SupportSchedule sched(9, {{0, 1}, {2, 3}, {4, 5}}, 2, 1, 1);
    const std::vector<RealMatrix> a(3, RealMatrix::Identity(2, 2));
    const auto chk = verify_m2_bound(sched, a);
    CHECK(chk.lhs == doctest::Approx(1.0));
    CHECK(chk.rhs == doctest::Approx(1.0));
    CHECK(chk.holds);
  }

  TEST_CASE("moving block with random PSD blocks") {
    std::mt19937_64 rng(1);
    const auto sched = generate_support_schedule(500, 100, 5, 2, 1);
    for (int it = 0; it < 20; ++it) {
      std::vector<RealMatrix> a;
      for (Index t = 0; t < sched.length(); ++t) {
        const RealMatrix g = corpca::testing::gaussian(5, 5, rng);
        a.push_back(g * g.transpose());
      }
      CHECK(verify_m2_bound(sched, a).holds);
    }
  }

  TEST_CASE("static support breaks the bound and is rejected") {
    const Index alpha = 30;
    CHECK_THROWS_AS(SupportSchedule(20, std::vector<IndexSet>(alpha, IndexSet{0, 1, 2}), 3, 2, 1), ScheduleError);
    // Summed directly the blocks stack up to alpha.
    RealMatrix sum = RealMatrix::Zero(20, 20);
    for (Index t = 0; t < alpha; ++t) sum.topLeftCorner(3, 3) += RealMatrix::Identity(3, 3);
    CHECK(spectral_norm(sum) == doctest::Approx(static_cast<double>(alpha)));
  }

  TEST_CASE("input errors") {
    const SupportSchedule sched(9, {{0, 1}}, 2, 1, 1);
    CHECK_THROWS_AS(verify_m2_bound(sched, std::vector<RealMatrix>{RealMatrix::Identity(3, 3)}), DimensionError);
    RealMatrix neg = RealMatrix::Identity(2, 2);
    neg(1, 1) = -1;
    CHECK_THROWS_AS(verify_m2_bound(sched, std::vector<RealMatrix>{neg}), PsdError);
  }
}

TEST_SUITE("perturbation_decomposition") {
  TEST_CASE("no perturbation") {
    const RealMatrix l = RealMatrix::Random(4, 6);
    const auto p = perturbation_decomposition(l, l);
    CHECK(p.cross == 0.0);
    CHECK(p.noise == 0.0);
    CHECK(p.h_norm == 0.0);
  }

  TEST_CASE("scalar expansion") {
    RealMatrix l = RealMatrix::Zero(3, 5);
    l.row(0).setOnes();
    const RealMatrix y = 1.1 * l;
    const auto p = perturbation_decomposition(y, l);
    CHECK(p.cross == doctest::Approx(0.1));
    CHECK(p.noise == doctest::Approx(0.01));
    CHECK(p.h_norm == doctest::Approx(0.21));
  }

  TEST_CASE("triangle inequality on corrupted data") {
    Rng rng(6);
    const SignalModel model(sparse_basis(80, 3), {10, 5, 1});
    for (int it = 0; it < 10; ++it) {
      const auto sched = generate_support_schedule(80, 20, 3, 3, 1, 0, true);
      const auto data = generate_dataset(model, SddcNoise{0.5, sched}, 20, rng);
      const auto p = perturbation_decomposition(data.y, data.l);
      CHECK(p.h_norm <= 2 * p.cross + p.noise + 1e-9);
    }
  }

  TEST_CASE("shape mismatch") {
    CHECK_THROWS_AS(perturbation_decomposition(RealMatrix::Zero(3, 2), RealMatrix::Zero(3, 3)), DimensionError);
  }
}

TEST_SUITE("sin_theta_gap_check") {
  TEST_CASE("no perturbation") {
    const RealMatrix a = Eigen::Vector3d(3, 2, 1).asDiagonal();
    const auto c = sin_theta_gap_check(a, RealMatrix::Zero(3, 3), 1);
    CHECK(c.bound == 0.0);
    CHECK(c.measured <= 1e-15);
  }

  TEST_CASE("off-diagonal coupling") {
    const RealMatrix a = Eigen::Vector3d(2, 1, 0).asDiagonal();
    RealMatrix h = RealMatrix::Zero(3, 3);
    h(0, 2) = h(2, 0) = 0.1;
    const auto c = sin_theta_gap_check(a, h, 1);
    CHECK(c.bound == doctest::Approx(0.1 / 0.9));
    CHECK(c.measured <= c.bound + 1e-9);
    CHECK(c.measured > 0.0);
  }

  TEST_CASE("gap errors") {
    const RealMatrix a = Eigen::Vector3d(1, 1, 0).asDiagonal();
    CHECK_THROWS_AS(sin_theta_gap_check(a, RealMatrix::Zero(3, 3), 1), GapError);
    const RealMatrix b = Eigen::Vector3d(2, 1, 0).asDiagonal();
    CHECK_THROWS_AS(sin_theta_gap_check(b, 1.5 * RealMatrix::Identity(3, 3), 1), GapError);
  }
}
