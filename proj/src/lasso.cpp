#include "pcs/lasso.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "pcs/error.hpp"

namespace pcs {

namespace {

double soft_threshold(double z, double gamma) {
  if (z > gamma) return z - gamma;
  if (z < -gamma) return z + gamma;
  return 0.0;
}

// One pass over `coords`; returns the largest absolute coefficient change.
double sweep(const Matrix& X, const Vector& col_sq, double lambda, double n, const std::vector<Index>& coords,
             Vector& beta, Vector& residual) {
  double max_change = 0.0;
  for (const Index j : coords) {
    if (col_sq(j) == 0.0) continue;
    const double old = beta(j);
    const double rho = X.col(j).dot(residual) / n + col_sq(j) * old;
    const double updated = soft_threshold(rho, lambda) / col_sq(j);
    if (updated != old) {
      residual.noalias() -= (updated - old) * X.col(j);
      beta(j) = updated;
      max_change = std::max(max_change, std::abs(updated - old));
    }
  }
  return max_change;
}

IndexSet top_scores(const Vector& primary, const Vector& secondary, Index k) {
  IndexSet order(static_cast<std::size_t>(primary.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    const bool aa = primary(a) > 0.0;
    const bool ab = primary(b) > 0.0;
    if (aa != ab) return aa;
    if (aa) return primary(a) > primary(b);
    return secondary(a) > secondary(b);
  });
  order.resize(static_cast<std::size_t>(k));
  return order;
}

}  // namespace

LassoFit lasso_fit(const Matrix& X, const Vector& y, double lambda, const LassoOptions& options,
                   const Vector* warm) {
  if (X.rows() != y.size()) throw Error(ErrorCode::RowCountMismatch, "lasso design and response differ in rows");
  if (!(lambda >= 0.0)) throw Error(ErrorCode::InvalidArgument, "lambda must be nonnegative");
  const double n = static_cast<double>(X.rows());
  const Index p = X.cols();

  LassoFit fit;
  fit.coefficients = warm ? *warm : Vector::Zero(p);
  Vector residual = y - X * fit.coefficients;
  const Vector col_sq = X.colwise().squaredNorm().transpose() / n;

  std::vector<Index> all(static_cast<std::size_t>(p));
  std::iota(all.begin(), all.end(), Index{0});
  std::vector<Index> active;

  fit.converged = false;
  while (fit.sweeps < options.max_sweeps) {
    ++fit.sweeps;
    if (sweep(X, col_sq, lambda, n, all, fit.coefficients, residual) < options.tolerance) {
      fit.converged = true;
      break;
    }
    active.clear();
    for (Index j = 0; j < p; ++j) {
      if (fit.coefficients(j) != 0.0) active.push_back(j);
    }
    while (fit.sweeps < options.max_sweeps) {
      ++fit.sweeps;
      if (sweep(X, col_sq, lambda, n, active, fit.coefficients, residual) < options.tolerance) break;
    }
  }
  if (!fit.converged && options.strict) {
    throw Error(ErrorCode::NoConvergence, "coordinate descent hit " + std::to_string(options.max_sweeps) +
                                              " sweeps at lambda=" + std::to_string(lambda) +
                                              " (partial result discarded)");
  }
  return fit;
}

double lasso_lambda_max(const Matrix& X, const Matrix& Y) {
  if (X.rows() != Y.rows()) throw Error(ErrorCode::RowCountMismatch, "lasso design and response differ in rows");
  return (X.transpose() * Y).cwiseAbs().maxCoeff() / static_cast<double>(X.rows());
}

LassoSelection lasso_select(const Matrix& X, const Matrix& Y, Index k, const LassoOptions& options) {
  if (k < 1 || k > X.cols()) {
    throw Error(ErrorCode::InvalidArgument, "k must lie in [1, p=" + std::to_string(X.cols()) + "]");
  }
  const Matrix Xs = center_and_scale(X);
  const Matrix Ys = center_and_scale(Y);
  const Index p = Xs.cols();
  const Index q = Ys.cols();

  const double lambda_max = lasso_lambda_max(Xs, Ys);
  const Index steps = std::max<Index>(options.path_length, 2);
  const double ratio = std::pow(options.min_ratio, 1.0 / static_cast<double>(steps - 1));

  Matrix beta = Matrix::Zero(p, q);
  LassoSelection out;
  Vector scores = Vector::Zero(p);
  for (Index step = 0; step < steps; ++step) {
    const double lambda = lambda_max * std::pow(ratio, static_cast<double>(step));
    for (Index r = 0; r < q; ++r) {
      const Vector warm = beta.col(r);
      LassoFit fit = lasso_fit(Xs, Ys.col(r), lambda, options, &warm);
      out.converged = out.converged && fit.converged;
      beta.col(r) = fit.coefficients;
    }
    scores = beta.rowwise().norm();
    out.lambda = lambda;
    out.active = (scores.array() > 0.0).count();
    if (out.active >= k) break;
  }

  // Residual correlations rank whatever the path did not activate.
  const Matrix residual = Ys - Xs * beta;
  const Vector gradient = (Xs.transpose() * residual).cwiseAbs().rowwise().maxCoeff();
  out.selected = top_scores(scores, gradient, k);
  return out;
}

}  // namespace pcs
