#include "pcs/predict.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>

#include "pcs/error.hpp"
#include "pcs/pcs.hpp"

namespace pcs {

bool budget_check(const TwoStagePlan& plan) {
  if (plan.n < 0 || plan.n > plan.t) return false;
  const auto cost = static_cast<std::uint64_t>(plan.n) * static_cast<std::uint64_t>(plan.p) +
                    static_cast<std::uint64_t>(plan.t - plan.n) * static_cast<std::uint64_t>(plan.k);
  return static_cast<double>(cost) <= plan.mu;
}

Index stage1_samples(double c, double t) {
  if (!(t >= 1.0) || !(c > 0.0)) throw Error(ErrorCode::InvalidArgument, "need t >= 1 and c > 0");
  const double x = c * std::log(t);
  // Snap rounding overshoot of an exact integer (e.g. 25 log e^2) before ceil.
  const double r = std::round(x);
  if (std::abs(x - r) <= 1e-12 * std::max(1.0, std::abs(x))) return static_cast<Index>(r);
  return static_cast<Index>(std::ceil(x));
}

Index allocation_rule(const TwoStagePlan& plan) {
  if (plan.t < 1) throw Error(ErrorCode::InvalidArgument, "t must be at least 1");
  if (!(plan.mu >= 0.0)) throw Error(ErrorCode::InvalidArgument, "mu must be nonnegative");
  const double log_t = std::log(static_cast<double>(plan.t));
  const double required = plan.c * static_cast<double>(plan.p - plan.k) * log_t +
                          static_cast<double>(plan.k) * static_cast<double>(plan.t);
  if (!(required <= plan.mu)) return 0;
  return stage1_samples(plan.c, static_cast<double>(plan.t));
}

Matrix min_norm_ols(const Matrix& X, const Matrix& Y) {
  return cross_covariance(X, Y) * pseudo_inverse(sample_covariance(X));
}

IndexSet top_k_by_score(const Vector& scores, Index k) {
  if (k < 0 || k > scores.size()) throw Error(ErrorCode::InvalidArgument, "k out of range");
  IndexSet order(static_cast<std::size_t>(scores.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return scores(a) > scores(b); });
  order.resize(static_cast<std::size_t>(k));
  return order;
}

IndexSet correlation_select(const Matrix& X, const Matrix& Y, Index k) {
  if (k < 1 || k > X.cols()) {
    throw Error(ErrorCode::InvalidArgument, "k must lie in [1, p=" + std::to_string(X.cols()) + "]");
  }
  const Matrix corr = cross_covariance(center_and_scale(X), center_and_scale(Y));  // q x p
  const Vector scores = corr.cwiseAbs().colwise().maxCoeff().transpose();
  return top_k_by_score(scores, k);
}

Screener pcs_screener() {
  return {"pcs", true, [](const Matrix& X, const Matrix& Y, Index k) {
            return pcs_screen(X, Y, 1, TopK{k}).selected;
          }};
}

Screener correlation_screener() {
  return {"correlation", false, [](const Matrix& X, const Matrix& Y, Index k) {
            return correlation_select(X, Y, k);
          }};
}

Screener lasso_screener(LassoOptions options) {
  return {"lasso", false, [options](const Matrix& X, const Matrix& Y, Index k) {
            return lasso_select(X, Y, k, options).selected;
          }};
}

Screener fixed_support_screener(IndexSet support, std::string name) {
  return {std::move(name), false,
          [support = std::move(support)](const Matrix&, const Matrix&, Index) { return support; }};
}

PredictorModel fit_on_support(const Matrix& X, const Matrix& Y, IndexSet support) {
  if (X.rows() != Y.rows()) throw Error(ErrorCode::RowCountMismatch, "X and Y differ in rows");
  std::sort(support.begin(), support.end());
  if (std::adjacent_find(support.begin(), support.end()) != support.end()) {
    throw Error(ErrorCode::InvalidArgument, "support indices must be distinct");
  }
  PredictorModel model;
  model.variables = X.cols();
  model.support = std::move(support);
  model.y_mean = Y.colwise().mean().transpose();
  const Matrix Yc = Y.rowwise() - model.y_mean.transpose();

  const Matrix Xs = select_columns(X, model.support);
  const Index k = Xs.cols();
  if (k == 0) {
    model.coefficients = Matrix::Zero(0, Y.cols());
    model.x_mean.resize(0);
    model.x_scale.resize(0);
    return model;
  }
  const ColumnStats stats = column_stats(Xs);
  model.x_mean = stats.mean;
  model.x_scale = stats.scale;
  const Matrix Z = center_and_scale(Xs, stats);
  try {
    model.coefficients = least_squares(Z, Yc).coefficients;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::IllConditioned) throw;
    // Small ridge keeps the fit defined; flagged so callers can tell.
    const Matrix gram = Z.transpose() * Z;
    const double lambda = 1e-8 * std::max(gram.trace() / static_cast<double>(k), 1.0);
    model.coefficients = (gram + lambda * Matrix::Identity(k, k)).ldlt().solve(Z.transpose() * Yc);
    model.ridge_fallback = true;
  }
  return model;
}

PredictorModel two_stage_fit(const Matrix& X, const Matrix& Y, Index n, Index k, const Screener& screener,
                             const TwoStageOptions& options) {
  if (X.rows() != Y.rows()) throw Error(ErrorCode::RowCountMismatch, "X and Y differ in rows");
  const Index t = X.rows();
  if (n < 0 || n > t) {
    throw Error(ErrorCode::InvalidArgument, "stage-1 size n=" + std::to_string(n) + " must lie in [0, t=" +
                                                std::to_string(t) + "]");
  }
  if (screener.needs_uscores && n < 3) {
    throw Error(ErrorCode::InsufficientStage1,
                screener.name + " needs at least 3 stage-1 samples, got " + std::to_string(n));
  }
  const IndexSet support = screener.select(X.topRows(n), Y.topRows(n), k);
  if (options.reuse_stage1) return fit_on_support(X, Y, support);
  return fit_on_support(X.bottomRows(t - n), Y.bottomRows(t - n), support);
}

Vector predict(const PredictorModel& model, const Vector& x) {
  const auto k = static_cast<Index>(model.support.size());
  Vector z(k);
  if (x.size() == model.variables) {
    for (Index c = 0; c < k; ++c) z(c) = x(model.support[static_cast<std::size_t>(c)]);
  } else if (x.size() == k) {
    z = x;
  } else {
    for (const Index s : model.support) {
      if (s >= x.size()) {
        throw Error(ErrorCode::MissingVariable, "input of length " + std::to_string(x.size()) +
                                                    " does not cover variable " + std::to_string(s));
      }
    }
    throw Error(ErrorCode::MissingVariable, "input length " + std::to_string(x.size()) +
                                                " matches neither p nor the support size");
  }
  if (k == 0) return model.y_mean;
  z = (z - model.x_mean).cwiseQuotient(model.x_scale);
  return model.y_mean + model.coefficients.transpose() * z;
}

Matrix predict_rows(const PredictorModel& model, const Matrix& X) {
  if (X.cols() != model.variables) {
    throw Error(ErrorCode::MissingVariable, "design has " + std::to_string(X.cols()) + " columns, model expects " +
                                                std::to_string(model.variables));
  }
  Matrix out = model.y_mean.transpose().replicate(X.rows(), 1);
  if (model.support.empty()) return out;
  const Matrix Xs = select_columns(X, model.support);
  const Matrix Z = (Xs.rowwise() - model.x_mean.transpose()).array().rowwise() / model.x_scale.transpose().array();
  out += Z * model.coefficients;
  return out;
}

double empirical_mse(const PredictorModel& model, const Matrix& Xtest, const Matrix& Ytest) {
  if (Xtest.rows() != Ytest.rows() || Xtest.rows() < 1) {
    throw Error(ErrorCode::RowCountMismatch, "test design and response must share a positive row count");
  }
  return (predict_rows(model, Xtest) - Ytest).squaredNorm() / static_cast<double>(Ytest.size());
}

}  // namespace pcs
