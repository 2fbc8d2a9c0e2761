#pragma once

#include <span>
#include <vector>

#include "corpca/datagen.hpp"
#include "corpca/linalg.hpp"

namespace corpca {

/// Inputs shared by the sample-complexity and beta/alpha calculators.
/// Logarithms are natural.
struct BoundInputs {
  Index n = 0;
  Index r = 0;
  Index r_k = 0;          // cluster size used by the cluster beta bound
  double f = 1.0;         // condition number of Lambda
  double g_plus = 1.0;    // clustering: within-cluster ratio bound
  double chi_plus = 0.0;  // clustering: between-cluster ratio bound
  double q = 0.0;         // bound on ||M_{1,t} P||
  double eta = 3.0;       // coefficient boundedness factor
  double zeta = 0.0;      // target error is r * zeta
  Index vartheta = 1;
};

/// C eta^2 r^2 (11 log n) / (r zeta)^2 * max(f, q f, q^2 f)^2 with C = 32 / 0.01^2.
/// Requires r zeta <= 0.01.
double alpha0_simple(const BoundInputs& in);

/// ((1 - r zeta)/2)^2 * min((r zeta)^2 / (4.1 (q f)^2), r zeta / (q^2 f)).
/// Returns +infinity when q = 0 (no constraint).
double beta_frac_simple(const BoundInputs& in);

/// C eta^2 r^2 (11 log n + log vartheta) / (r zeta)^2 * max(g, q g, q^2 f,
/// q (r zeta) f, (r zeta)^2 f, q sqrt(f g), (r zeta) sqrt(f g))^2 with
/// C = 32 * 16 / 0.01^2. Requires r^2 zeta <= 1e-4, r^2 zeta f <= 0.01 and the
/// chi_plus ceiling min(1 - r zeta - 0.08/0.25, (g - 1e-4)/(1.01 g + 1e-4) - 1e-4).
double alpha0_cluster(const BoundInputs& in);

/// ((1 - r zeta - chi)/2)^2 * min((r_k zeta)^2 / (4.1 (q g)^2), r_k zeta / (q^2 f)).
/// Requires chi_plus < 1 - r zeta; +infinity when q = 0.
double beta_frac_cluster(const BoundInputs& in);

/// g_hat = 1.01 g_plus + 0.0001 and thresh = 0.95 lambda_min, the parameter
/// setting under which the cluster-EVD guarantee is stated.
struct GuaranteeParameters {
  double g_hat = 1.0;
  double thresh = 0.0;
};
GuaranteeParameters guarantee_parameters(double g_plus, double lambda_min);

struct M2BoundCheck {
  double lhs = 0.0;  // || sum_t I_T A_t I_T^T ||
  double rhs = 0.0;  // rho^2 beta_tilde max_t ||A_t||
  bool holds = false;
};

/// Brute-force check of the block bound || sum_t I_{T_t} A_t I_{T_t}^T || <= rho^2 beta_tilde max_t ||A_t||
/// for symmetric PSD A_t of size |T_t|.
M2BoundCheck verify_m2_bound(const SupportSchedule& schedule, std::span<const RealMatrix> a_list);

struct PerturbationParts {
  double cross = 0.0;   // ||(1/alpha) sum l_t w_t^T||
  double noise = 0.0;   // ||(1/alpha) sum w_t w_t^T||
  double h_norm = 0.0;  // ||cov(Y) - cov(L)||
};

/// Splits the covariance perturbation with w_t = y_t - l_t. Always satisfies
/// h_norm <= 2 cross + noise up to roundoff.
PerturbationParts perturbation_decomposition(const RealMatrix& y, const RealMatrix& l);

struct SinThetaCheck {
  double bound = 0.0;
  double measured = 0.0;
};

/// Compares SE(top_r(A + H), top_r(A)) against the sin-theta bound built from
/// lambda_r(A), lambda_{r+1}(A) and ||H||. Throws GapError when the bound does
/// not apply.
SinThetaCheck sin_theta_gap_check(const RealMatrix& a_full, const RealMatrix& h, Index r);

}  // namespace corpca
