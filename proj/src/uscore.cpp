#include "pcs/uscore.hpp"

#include <cmath>
#include <string>

#include "pcs/error.hpp"

namespace pcs {

namespace {

constexpr double kMinVariance = 1e-14;
constexpr double kMinWeight = 1e-14;

}  // namespace

Matrix helmert_basis(Index n) {
  Matrix H = Matrix::Zero(n - 1, n);
  for (Index k = 0; k + 1 < n; ++k) {
    const double s = 1.0 / std::sqrt(static_cast<double>((k + 1) * (k + 2)));
    H.row(k).head(k + 1).setConstant(s);
    H(k, k + 1) = -static_cast<double>(k + 1) * s;
  }
  return H;
}

UScoreMatrix uscores(const Matrix& X) {
  const Index n = X.rows();
  if (n < 3) {
    throw Error(ErrorCode::InvalidArgument, "U-scores need at least 3 samples, got " + std::to_string(n));
  }
  UScoreMatrix U{Matrix(n - 1, X.cols())};
  for (Index j = 0; j < X.cols(); ++j) {
    const auto x = X.col(j);
    // Center first so the prefix sums stay well scaled.
    const double mean = x.mean();
    double prefix = 0.0;
    for (Index k = 0; k + 1 < n; ++k) {
      prefix += x(k) - mean;
      const double s = 1.0 / std::sqrt(static_cast<double>((k + 1) * (k + 2)));
      U.values(k, j) = s * (prefix - static_cast<double>(k + 1) * (x(k + 1) - mean));
    }
    // ||H (x - mean)||^2 = (n - 1) * sample variance
    const double norm = U.values.col(j).norm();
    if (!(norm * norm / static_cast<double>(n - 1) >= kMinVariance)) {
      throw Error(ErrorCode::ConstantColumn, "column " + std::to_string(j) + " has zero variance");
    }
    U.values.col(j) /= norm;
  }
  return U;
}

UTilde u_tilde(const UScoreMatrix& Ux) {
  const Matrix gram = Ux.values * Ux.values.transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
  const double lmin = eig.eigenvalues()(0);
  const double lmax = eig.eigenvalues()(eig.eigenvalues().size() - 1);
  if (!(lmin > 0.0) || !(lmax / lmin < kMaxCondition)) {
    throw Error(ErrorCode::SingularGram,
                "U-score Gram matrix of size " + std::to_string(gram.rows()) +
                    " is singular or ill-conditioned (p=" + std::to_string(Ux.cols()) + ")");
  }
  Eigen::LLT<Matrix> llt(gram);
  Matrix W = llt.solve(Ux.values);

  UTilde out;
  out.dvals.resize(W.cols());
  for (Index i = 0; i < W.cols(); ++i) {
    const double d = W.col(i).norm();
    if (!(d > kMinWeight)) {
      throw Error(ErrorCode::ZeroWeight, "variable " + std::to_string(i) + " has vanishing weight");
    }
    out.dvals(i) = d;
    W.col(i) /= d;
  }
  out.tilde.values = std::move(W);
  return out;
}

UTilde u_tilde_pinv(const UScoreMatrix& Ux) {
  // (U U^T)^+ U = (U^+)^T
  Matrix W = pseudo_inverse(Ux.values).transpose();
  UTilde out;
  out.dvals.resize(W.cols());
  for (Index i = 0; i < W.cols(); ++i) {
    const double d = W.col(i).norm();
    if (!(d > kMinWeight)) {
      throw Error(ErrorCode::ZeroWeight, "variable " + std::to_string(i) + " has vanishing weight");
    }
    out.dvals(i) = d;
    W.col(i) /= d;
  }
  out.tilde.values = std::move(W);
  return out;
}

HMatrix h_matrix(const UTilde& tilde, const UScoreMatrix& Uy) {
  if (tilde.tilde.dim() != Uy.dim()) {
    throw Error(ErrorCode::RowCountMismatch, "U-score dimensions differ: " +
                                                 std::to_string(tilde.tilde.dim()) + " vs " +
                                                 std::to_string(Uy.dim()));
  }
  HMatrix H;
  H.entries = tilde.tilde.values.transpose() * Uy.values;
  H.dvals = tilde.dvals;
  H.weights = tilde.dvals / tilde.dvals.sum();
  return H;
}

HMatrix h_matrix(const UScoreMatrix& Ux, const UScoreMatrix& Uy) {
  if (Ux.dim() != Uy.dim()) {
    throw Error(ErrorCode::RowCountMismatch, "U-score dimensions differ: " +
                                                 std::to_string(Ux.dim()) + " vs " +
                                                 std::to_string(Uy.dim()));
  }
  return h_matrix(u_tilde(Ux), Uy);
}

Matrix coefficient_matrix(const UScoreMatrix& Ux, const UScoreMatrix& Uy, const Matrix& Xnorm,
                          const Matrix& Ynorm) {
  const ColumnStats sx = column_stats(Xnorm);
  const ColumnStats sy = column_stats(Ynorm);
  HMatrix H;
  try {
    H = h_matrix(Ux, Uy);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SingularGram) throw;
    H = h_matrix(u_tilde_pinv(Ux), Uy);
  }
  const Vector col_scale = H.dvals.cwiseQuotient(sx.scale);
  return sy.scale.asDiagonal() * H.entries.transpose() * col_scale.asDiagonal();
}

}  // namespace pcs
