#pragma once

#include <optional>

#include "pcs/matrix.hpp"

namespace pcs {

/// Dimensions and thresholds of one screening problem.
struct ScreenParams {
  Index p = 1;      // regressors
  Index q = 1;      // responses
  Index n = 3;      // samples
  Index delta = 1;  // degree threshold, 1 <= delta <= q
  double rho = 0.0; // correlation threshold in [0, 1]
};

/// Throws InvalidArgument (or DegreeOutOfRange for delta) on a violated invariant.
void validate(const ScreenParams& params);

/// Surface area a_n of the unit sphere S_{n-2} in R^{n-1}: 2 pi^{(n-1)/2} / Gamma((n-1)/2).
double sphere_area(Index n);

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation
/// (modified Lentz) with ~1e-15 relative convergence.
double incomplete_beta(double x, double a, double b);

/// Probability that |U^T V| >= rho for independent uniform U, V on S_{n-2}:
/// the normalized area of two antipodal caps, I_{1-rho^2}((n-2)/2, 1/2).
double p0(Index n, double rho);

double binomial_coefficient(Index n, Index k);

/// Expected discovery rate p * C(q, delta) * P0^delta.
double xi(const ScreenParams& params);

/// Poisson rate constant (e a_n / (n-2))^delta / delta! for a user-supplied
/// asymptotic constant e = lim p^{1/delta} q (1 - rho_p^2)^{(n-2)/2}.
double kappa(Index n, Index delta, double e_limit);

/// Approximate p-value 1 - exp(-xi), clamped to [0, 1].
double pvalue(double xi_value);

/// a_n * delta, the block-sparse value of the critical-threshold constant.
double default_critical_constant(Index n, Index delta);

/// rho_c = sqrt(1 - (c p)^{-2 delta / (delta (n-2) - 2)}).
/// Throws DegenerateExponent when delta (n-2) <= 2 and OutOfRange when the
/// inner power exceeds 1 (c p < 1).
double critical_threshold(Index p, Index n, Index delta, std::optional<double> c = std::nullopt);

/// Threshold rho at which xi(p, q, n, delta, rho) equals `target`, by bisection
/// on the monotone map rho -> xi. Returns 0 or 1 when the target is outside
/// the attainable range.
double rho_for_xi(Index p, Index q, Index n, Index delta, double target);

}  // namespace pcs
