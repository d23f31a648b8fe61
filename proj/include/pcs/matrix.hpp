#pragma once

#include <vector>

#include <Eigen/Dense>

namespace pcs {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IndexSet = std::vector<Index>;

/// Per-column location and scale. `scale` is the sample standard deviation
/// (divisor n-1), the convention used throughout the library.
struct ColumnStats {
  Vector mean;
  Vector scale;
};

ColumnStats column_stats(const Matrix& X);

/// Columns shifted to mean 0 and scaled to sample variance 1.
/// Throws ConstantColumn for any column whose variance is below 1e-14.
Matrix center_and_scale(const Matrix& X);
Matrix center_and_scale(const Matrix& X, const ColumnStats& stats);

Matrix sample_covariance(const Matrix& X);

/// q x p matrix whose (j, i) entry is cov(Y_j, X_i).
Matrix cross_covariance(const Matrix& X, const Matrix& Y);

/// Moore-Penrose inverse via SVD. Singular values at or below
/// max(rows, cols) * eps * sigma_max are treated as zero.
Matrix pseudo_inverse(const Matrix& M);

struct LeastSquaresFit {
  Matrix coefficients;  // k x q
  double condition = 1.0;
};

inline constexpr double kMaxCondition = 1e12;

/// Full-column-rank least squares of Y on the columns of X.
/// Throws IllConditioned when cond(X) exceeds kMaxCondition (including t < k).
LeastSquaresFit least_squares(const Matrix& X, const Matrix& Y);

/// Columns of X at the given indices, in that order.
Matrix select_columns(const Matrix& X, const IndexSet& columns);

}  // namespace pcs
