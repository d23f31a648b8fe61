#include "pcs/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pcs/error.hpp"

namespace pcs {

namespace {

constexpr double kMinVariance = 1e-14;

void require_rows(const Matrix& X, Index min_rows, const char* what) {
  if (X.rows() < min_rows) {
    throw Error(ErrorCode::InvalidArgument,
                std::string(what) + " needs at least " + std::to_string(min_rows) +
                    " rows, got " + std::to_string(X.rows()));
  }
}

}  // namespace

ColumnStats column_stats(const Matrix& X) {
  require_rows(X, 2, "column_stats");
  ColumnStats stats;
  stats.mean = X.colwise().mean().transpose();
  stats.scale.resize(X.cols());
  const double denom = static_cast<double>(X.rows() - 1);
  for (Index j = 0; j < X.cols(); ++j) {
    const double var = (X.col(j).array() - stats.mean(j)).square().sum() / denom;
    stats.scale(j) = std::sqrt(var);
  }
  return stats;
}

Matrix center_and_scale(const Matrix& X) { return center_and_scale(X, column_stats(X)); }

Matrix center_and_scale(const Matrix& X, const ColumnStats& stats) {
  Matrix out(X.rows(), X.cols());
  for (Index j = 0; j < X.cols(); ++j) {
    const double s = stats.scale(j);
    if (!(s * s >= kMinVariance)) {
      throw Error(ErrorCode::ConstantColumn, "column " + std::to_string(j) + " has zero variance");
    }
    out.col(j) = (X.col(j).array() - stats.mean(j)) / s;
  }
  return out;
}

Matrix sample_covariance(const Matrix& X) {
  require_rows(X, 2, "sample_covariance");
  const Matrix centered = X.rowwise() - X.colwise().mean();
  Matrix S = centered.transpose() * centered / static_cast<double>(X.rows() - 1);
  // Enforce exact symmetry; the product is symmetric only up to rounding.
  return (S + S.transpose()) * 0.5;
}

Matrix cross_covariance(const Matrix& X, const Matrix& Y) {
  if (X.rows() != Y.rows()) {
    throw Error(ErrorCode::RowCountMismatch, "X has " + std::to_string(X.rows()) +
                                                 " rows but Y has " + std::to_string(Y.rows()));
  }
  require_rows(X, 2, "cross_covariance");
  const Matrix xc = X.rowwise() - X.colwise().mean();
  const Matrix yc = Y.rowwise() - Y.colwise().mean();
  return yc.transpose() * xc / static_cast<double>(X.rows() - 1);
}

Matrix pseudo_inverse(const Matrix& M) {
  if (M.size() == 0) return Matrix::Zero(M.cols(), M.rows());
  Eigen::BDCSVD<Matrix> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sv = svd.singularValues();
  const double tol = static_cast<double>(std::max(M.rows(), M.cols())) *
                     std::numeric_limits<double>::epsilon() * sv(0);
  Vector inv = Vector::Zero(sv.size());
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol) inv(i) = 1.0 / sv(i);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

LeastSquaresFit least_squares(const Matrix& X, const Matrix& Y) {
  if (X.rows() != Y.rows()) {
    throw Error(ErrorCode::RowCountMismatch, "design has " + std::to_string(X.rows()) +
                                                 " rows but response has " +
                                                 std::to_string(Y.rows()));
  }
  LeastSquaresFit fit;
  if (X.cols() == 0) {
    fit.coefficients = Matrix::Zero(0, Y.cols());
    return fit;
  }
  if (X.rows() < X.cols()) {
    throw Error(ErrorCode::IllConditioned, std::to_string(X.rows()) + " rows cannot determine " +
                                               std::to_string(X.cols()) + " coefficients");
  }
  Eigen::BDCSVD<Matrix> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  fit.condition = smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
  if (!(fit.condition < kMaxCondition)) {
    throw Error(ErrorCode::IllConditioned,
                "condition number " + std::to_string(fit.condition) + " exceeds 1e12");
  }
  fit.coefficients = svd.solve(Y);
  return fit;
}

Matrix select_columns(const Matrix& X, const IndexSet& columns) {
  Matrix out(X.rows(), static_cast<Index>(columns.size()));
  for (std::size_t c = 0; c < columns.size(); ++c) {
    const Index j = columns[c];
    if (j < 0 || j >= X.cols()) {
      throw Error(ErrorCode::InvalidArgument, "column index " + std::to_string(j) + " out of range");
    }
    out.col(static_cast<Index>(c)) = X.col(j);
  }
  return out;
}

}  // namespace pcs
