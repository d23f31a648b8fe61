#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "pcs/matrix.hpp"
#include "pcs/screenstats.hpp"
#include "pcs/uscore.hpp"

namespace pcs {

struct SignificanceLevel {
  double alpha = 0.05;
};

struct TopK {
  Index k = 1;
};

using Selection = std::variant<SignificanceLevel, TopK>;

struct VariableScore {
  Index index = 0;
  double rho = 0.0;      // delta-th largest |h_ij| over j
  double weight = 0.0;   // w_i
  double rho_mod = 0.0;  // w_i * rho
  double pvalue = 1.0;
  std::optional<Index> degree;  // degree at rho_star, when a rho_star is in effect
};

struct ScreeningResult {
  std::vector<VariableScore> variables;  // indexed by variable
  IndexSet selected;                     // by ascending p-value, then larger rho_mod, then index
  ScreenParams params;                   // params.rho is unused (per-variable thresholds)
  std::optional<double> rho_star;
};

/// d_i = #{ j : |h_ij| > rho_star }.
std::vector<Index> degrees(const HMatrix& H, double rho_star);

/// delta-th largest |h_ij| of row i, duplicates counted. Throws DegreeOutOfRange.
double rho_at_degree(const HMatrix& H, Index i, Index delta);

/// delta-th largest magnitude of every row of M.
Vector row_order_statistics(const Matrix& M, Index delta);

/// Full screening pipeline: normalize, U-scores, H^xy, modified thresholds
/// and p-values, then selection. A singular U-score Gram matrix (p < n - 1)
/// switches to the pseudo-inverse form of Utilde. When `rho_star` is not given the critical
/// threshold rho_c (default constant) is used for the degree report if it is
/// defined for (p, n, delta); otherwise degrees are omitted.
ScreeningResult pcs_screen(const Matrix& X, const Matrix& Y, Index delta, const Selection& selection,
                           std::optional<double> rho_star = std::nullopt);

/// Number of rows of `correlations` with at least delta entries of magnitude >= rho.
Index discovery_count(const Matrix& correlations, Index delta, double rho);

/// N_{delta,rho} for the matrix (Ux)^T Uy.
Index discovery_count(const UScoreMatrix& Ux, const UScoreMatrix& Uy, Index delta, double rho);

}  // namespace pcs
