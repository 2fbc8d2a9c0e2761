#include "corpca/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace corpca {

namespace {

void require_common(const BoundInputs& in) {
  if (in.n < 1 || in.r < 1) throw ParameterError("n and r must be positive");
  if (!(in.zeta > 0.0)) throw ParameterError("zeta must be > 0");
  if (!(in.f >= 1.0)) throw ParameterError("f must be >= 1");
  if (!(in.q >= 0.0)) throw ParameterError("q must be >= 0");
  if (!(in.eta > 0.0)) throw ParameterError("eta must be > 0");
}

void require_simple_bound(const BoundInputs& in) {
  require_common(in);
  if (!(static_cast<double>(in.r) * in.zeta <= 0.01)) throw ParameterError("violated: r * zeta <= 0.01");
}

void require_cluster_bound(const BoundInputs& in) {
  require_common(in);
  const double r2 = static_cast<double>(in.r) * static_cast<double>(in.r);
  if (!(r2 * in.zeta <= 1e-4)) throw ParameterError("violated: r^2 * zeta <= 0.0001");
  if (!(r2 * in.zeta * in.f <= 0.01)) throw ParameterError("violated: r^2 * zeta * f <= 0.01");
  if (!(in.g_plus >= 1.0)) throw ParameterError("violated: g_plus >= 1");
  if (in.vartheta < 1) throw ParameterError("violated: vartheta >= 1");
  if (!(in.chi_plus >= 0.0)) throw ParameterError("violated: chi_plus >= 0");
  const double rz = static_cast<double>(in.r) * in.zeta;
  const double ceiling = std::min(1.0 - rz - 0.08 / 0.25,
                                  (in.g_plus - 0.0001) / (1.01 * in.g_plus + 0.0001) - 0.0001);
  if (!(in.chi_plus <= ceiling)) {
    throw ParameterError("violated: chi_plus <= " + std::to_string(ceiling));
  }
}

double sq(double x) { return x * x; }

}  // namespace

double alpha0_simple(const BoundInputs& in) {
  require_simple_bound(in);
  constexpr double c = 32.0 / (0.01 * 0.01);
  const double r = static_cast<double>(in.r);
  const double m = std::max({in.f, in.q * in.f, in.q * in.q * in.f});
  return c * sq(in.eta) * (r * r * 11.0 * std::log(static_cast<double>(in.n))) / sq(r * in.zeta) * sq(m);
}

double beta_frac_simple(const BoundInputs& in) {
  require_simple_bound(in);
  if (in.q == 0.0) return std::numeric_limits<double>::infinity();
  const double rz = static_cast<double>(in.r) * in.zeta;
  return sq((1.0 - rz) / 2.0) * std::min(sq(rz) / (4.1 * sq(in.q * in.f)), rz / (sq(in.q) * in.f));
}

double alpha0_cluster(const BoundInputs& in) {
  require_cluster_bound(in);
  constexpr double c = 32.0 * 16.0 / (0.01 * 0.01);
  const double r = static_cast<double>(in.r);
  const double rz = r * in.zeta;
  const double g = in.g_plus;
  const double q = in.q;
  const double f = in.f;
  const double m = std::max({g, q * g, q * q * f, q * rz * f, rz * rz * f, q * std::sqrt(f * g),
                             rz * std::sqrt(f * g)});
  const double logs = 11.0 * std::log(static_cast<double>(in.n)) + std::log(static_cast<double>(in.vartheta));
  return c * sq(in.eta) * (r * r * logs) / sq(rz) * sq(m);
}

double beta_frac_cluster(const BoundInputs& in) {
  require_common(in);
  if (in.r_k < 1 || in.r_k > in.r) throw ParameterError("violated: 1 <= r_k <= r");
  if (!(in.g_plus >= 1.0)) throw ParameterError("violated: g_plus >= 1");
  const double rz = static_cast<double>(in.r) * in.zeta;
  if (!(in.chi_plus >= 0.0 && in.chi_plus < 1.0 - rz)) throw ParameterError("violated: 0 <= chi_plus < 1 - r * zeta");
  if (in.q == 0.0) return std::numeric_limits<double>::infinity();
  const double rkz = static_cast<double>(in.r_k) * in.zeta;
  return sq((1.0 - rz - in.chi_plus) / 2.0) *
         std::min(sq(rkz) / (4.1 * sq(in.q * in.g_plus)), rkz / (sq(in.q) * in.f));
}

GuaranteeParameters guarantee_parameters(double g_plus, double lambda_min) {
  if (!(g_plus >= 1.0)) throw ParameterError("g_plus must be >= 1");
  if (!(lambda_min > 0.0)) throw ParameterError("lambda_min must be > 0");
  return {1.01 * g_plus + 0.0001, 0.95 * lambda_min};
}

M2BoundCheck verify_m2_bound(const SupportSchedule& schedule, std::span<const RealMatrix> a_list) {
  if (static_cast<Index>(a_list.size()) != schedule.length()) {
    throw DimensionError("verify_m2_bound: need one A_t per support set");
  }
  const Index n = schedule.n();
  RealMatrix sum = RealMatrix::Zero(n, n);
  double max_norm = 0.0;
  for (Index t = 0; t < schedule.length(); ++t) {
    const IndexSet& support = schedule.at(t);
    const RealMatrix& a = a_list[static_cast<std::size_t>(t)];
    const auto k = static_cast<Index>(support.size());
    if (a.rows() != k || a.cols() != k) {
      throw DimensionError("A_t at t=" + std::to_string(t) + " must be " + std::to_string(k) + "x" + std::to_string(k));
    }
    if (k == 0) continue;
    const EigenDecomposition eig = sym_eig(a);
    if (eig.eigenvalues(k - 1) < -1e-9) {
      throw PsdError("A_t at t=" + std::to_string(t) + " has eigenvalue " + std::to_string(eig.eigenvalues(k - 1)));
    }
    max_norm = std::max(max_norm, std::max(std::abs(eig.eigenvalues(0)), std::abs(eig.eigenvalues(k - 1))));
    for (Index i = 0; i < k; ++i)
      for (Index j = 0; j < k; ++j) sum(support[i], support[j]) += a(i, j);
  }
  M2BoundCheck out;
  out.lhs = spectral_norm(sum);
  out.rhs = static_cast<double>(schedule.beta()) * max_norm;
  out.holds = out.lhs <= out.rhs + 1e-9;
  return out;
}

PerturbationParts perturbation_decomposition(const RealMatrix& y, const RealMatrix& l) {
  if (y.rows() != l.rows() || y.cols() != l.cols()) throw DimensionError("perturbation_decomposition: Y and L shapes differ");
  if (y.cols() < 1) throw DimensionError("perturbation_decomposition: no columns");
  const double alpha = static_cast<double>(y.cols());
  const RealMatrix w = y - l;
  PerturbationParts out;
  out.cross = spectral_norm(RealMatrix(l * w.transpose()) / alpha);
  out.noise = spectral_norm(RealMatrix(w * w.transpose()) / alpha);
  out.h_norm = spectral_norm(empirical_covariance(y) - empirical_covariance(l));
  return out;
}

SinThetaCheck sin_theta_gap_check(const RealMatrix& a_full, const RealMatrix& h, Index r) {
  require_symmetric(a_full, "A");
  require_symmetric(h, "H");
  if (h.rows() != a_full.rows()) throw DimensionError("sin_theta_gap_check: A and H sizes differ");
  const Index n = a_full.rows();
  if (r < 1 || r >= n) throw DimensionError("sin_theta_gap_check: need 1 <= r < n");
  const EigenDecomposition eig_a = sym_eig(a_full);
  if (!(eig_a.eigenvalues(r - 1) > eig_a.eigenvalues(r))) {
    throw GapError("sin_theta_gap_check: lambda_r(A) == lambda_{r+1}(A)");
  }
  SinThetaCheck out;
  out.bound = sin_theta_bound(eig_a.eigenvalues(r - 1), eig_a.eigenvalues(r), spectral_norm(h));
  out.measured = subspace_error(top_eigenvectors(RealMatrix(a_full + h), r), top_eigenvectors(eig_a, r));
  return out;
}

}  // namespace corpca
