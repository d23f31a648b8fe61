#pragma once

#include "pcs/matrix.hpp"

namespace pcs {

struct LassoOptions {
  double tolerance = 1e-7;   // max absolute coefficient change per sweep
  Index max_sweeps = 10000;  // per lambda, counting full and active-set sweeps
  Index path_length = 100;   // geometric grid points from lambda_max down
  double min_ratio = 1e-4;   // smallest lambda as a fraction of lambda_max
  bool strict = false;       // throw NoConvergence instead of flagging it
};

struct LassoFit {
  Vector coefficients;
  bool converged = true;
  Index sweeps = 0;
};

/// Minimizes (1/2n) ||y - X b||^2 + lambda ||b||_1 by cyclic coordinate
/// descent. Sweeps alternate between the full coordinate set and the current
/// nonzero set, glmnet style. `warm` seeds the coefficients.
LassoFit lasso_fit(const Matrix& X, const Vector& y, double lambda, const LassoOptions& options = {},
                   const Vector* warm = nullptr);

/// max_{i,j} |x_i^T y_j| / n: the smallest lambda with an all-zero solution.
double lasso_lambda_max(const Matrix& X, const Matrix& Y);

struct LassoSelection {
  IndexSet selected;
  double lambda = 0.0;  // where the path stopped
  Index active = 0;     // variables with a nonzero coefficient for some response there
  bool converged = true;
};

/// Standardizes X and Y, fits every response along a shared warm-started
/// lambda path, and stops at the largest lambda with >= k active variables.
/// Variables are scored by the l2 norm of their coefficient row across
/// responses. If the path bottoms out with fewer than k active, the remaining
/// slots go to the inactive variables with the largest residual correlation.
LassoSelection lasso_select(const Matrix& X, const Matrix& Y, Index k, const LassoOptions& options = {});

}  // namespace pcs
