#pragma once

#include "pcs/matrix.hpp"

namespace pcs {

/// (n-1) x p matrix of unit columns on S_{n-2}. Inner products of two
/// columns are the sample correlations of the source variables.
struct UScoreMatrix {
  Matrix values;

  Index dim() const { return values.rows(); }
  Index cols() const { return values.cols(); }
};

/// Deterministic (n-1) x n Helmert basis: orthonormal rows, each orthogonal
/// to the all-ones vector. Row k (0-based) is proportional to
/// (1, ..., 1, -(k+1), 0, ..., 0) with k+1 leading ones.
Matrix helmert_basis(Index n);

/// U-scores of the columns of X (n >= 3). The Helmert transform is applied
/// in O(n) per column via prefix sums, then each column is scaled to unit norm.
/// Throws ConstantColumn for a column with no variation.
UScoreMatrix uscores(const Matrix& X);

/// Pseudo-inverse-weighted U-scores,
///   Utilde = (U U^T)^{-1} U diag(D)^{-1},  D(i) = ||((U U^T)^{-1} U)_i||,
/// with `dvals` holding D. Throws SingularGram when U U^T is not safely
/// invertible and ZeroWeight(i) if some D(i) underflows.
struct UTilde {
  UScoreMatrix tilde;
  Vector dvals;
};

UTilde u_tilde(const UScoreMatrix& Ux);

/// Same construction with the pseudo-inverse of U U^T, defined for any p
/// (used when the Gram matrix is singular, e.g. p < n - 1).
UTilde u_tilde_pinv(const UScoreMatrix& Ux);

/// H^xy = Utilde^T U^y (p x q) together with D and w = D / sum(D).
struct HMatrix {
  Matrix entries;
  Vector weights;
  Vector dvals;

  Index p() const { return entries.rows(); }
  Index q() const { return entries.cols(); }
};

HMatrix h_matrix(const UScoreMatrix& Ux, const UScoreMatrix& Uy);
HMatrix h_matrix(const UTilde& tilde, const UScoreMatrix& Uy);

/// q x p regression coefficients rebuilt from U-scores,
///   diag(sd_y) H^T diag(D) diag(sd_x)^{-1}.
/// For normalized inputs this equals S^yx (S^x)^+, the min-norm OLS solution.
/// When U U^T is singular (p < n - 1) the pseudo-inverse construction is used.
Matrix coefficient_matrix(const UScoreMatrix& Ux, const UScoreMatrix& Uy, const Matrix& Xnorm,
                          const Matrix& Ynorm);

}  // namespace pcs
