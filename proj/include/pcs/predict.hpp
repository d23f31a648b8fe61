#pragma once

#include <functional>
#include <limits>
#include <string>

#include "pcs/lasso.hpp"
#include "pcs/matrix.hpp"

namespace pcs {

/// Allocation and budget state of the two-stage n|t design. `mu` counts
/// variable-samples; +infinity means unconstrained.
struct TwoStagePlan {
  Index n = 0;
  Index t = 1;
  Index p = 1;
  Index k = 1;
  double mu = std::numeric_limits<double>::infinity();
  double c = 25.0;
};

/// n p + (t - n) k <= mu, evaluated exactly for integer budgets below 2^53.
bool budget_check(const TwoStagePlan& plan);

/// ceil(c log t), natural log, for real t >= 1. Values within 1e-12 of an
/// integer are taken as that integer.
Index stage1_samples(double c, double t);

/// ceil(c log t) when c (p - k) log t + k t <= mu, otherwise 0 (skip stage 1).
Index allocation_rule(const TwoStagePlan& plan);

/// Minimum-Frobenius-norm least squares S^yx (S^x)^+ on normalized data (q x p).
Matrix min_norm_ols(const Matrix& X, const Matrix& Y);

/// Top k variables by max_j |corr(X_i, Y_j)|, ties to the smaller index.
IndexSet correlation_select(const Matrix& X, const Matrix& Y, Index k);

/// Indices of the k largest scores, ties to the smaller index.
IndexSet top_k_by_score(const Vector& scores, Index k);

/// A stage-1 variable screener: picks k columns of X given responses Y.
struct Screener {
  std::string name;
  bool needs_uscores = false;
  std::function<IndexSet(const Matrix& X, const Matrix& Y, Index k)> select;
};

Screener pcs_screener();
Screener correlation_screener();
Screener lasso_screener(LassoOptions options = {});
/// Always returns `support`, whatever the data; the oracle of the MSE study.
Screener fixed_support_screener(IndexSet support, std::string name = "oracle");

/// Linear predictor on a variable subset. Inputs are standardized with the
/// captured means and scales; the response intercept is the training mean.
struct PredictorModel {
  Index variables = 0;  // p of the full design
  IndexSet support;     // ascending, distinct
  Matrix coefficients;  // |support| x q
  Vector x_mean;        // over support
  Vector x_scale;
  Vector y_mean;        // q
  bool ridge_fallback = false;
};

/// OLS of Y on the standardized `support` columns of X.
PredictorModel fit_on_support(const Matrix& X, const Matrix& Y, IndexSet support);

struct TwoStageOptions {
  /// true: stage 2 uses all t rows (n|t); false: only rows n..t-1 (n|(t-n)).
  bool reuse_stage1 = true;
};

/// Stage 1 screens the first n rows over all p variables for k indices;
/// stage 2 fits least squares on those k columns.
PredictorModel two_stage_fit(const Matrix& X, const Matrix& Y, Index n, Index k, const Screener& screener,
                             const TwoStageOptions& options = {});

/// `x` is either a full p-vector or a |support|-vector of the support values.
/// Throws MissingVariable naming the first uncovered support index otherwise.
Vector predict(const PredictorModel& model, const Vector& x);

/// Predictions for every row of a full-width design.
Matrix predict_rows(const PredictorModel& model, const Matrix& X);

/// Mean of squared errors over rows and response coordinates.
double empirical_mse(const PredictorModel& model, const Matrix& Xtest, const Matrix& Ytest);

}  // namespace pcs
