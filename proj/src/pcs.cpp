#include "pcs/pcs.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "pcs/error.hpp"

namespace pcs {

namespace {

void check_delta(Index delta, Index q) {
  if (delta < 1 || delta > q) {
    throw Error(ErrorCode::DegreeOutOfRange,
                "delta=" + std::to_string(delta) + " must lie in [1, q=" + std::to_string(q) + "]");
  }
}

double kth_largest_magnitude(const auto& row, Index delta, std::vector<double>& scratch) {
  scratch.resize(static_cast<std::size_t>(row.size()));
  for (Index j = 0; j < row.size(); ++j) scratch[static_cast<std::size_t>(j)] = std::abs(row(j));
  auto nth = scratch.begin() + (delta - 1);
  std::nth_element(scratch.begin(), nth, scratch.end(), std::greater<>());
  return *nth;
}

}  // namespace

std::vector<Index> degrees(const HMatrix& H, double rho_star) {
  std::vector<Index> d(static_cast<std::size_t>(H.p()), 0);
  for (Index i = 0; i < H.p(); ++i) {
    d[static_cast<std::size_t>(i)] = (H.entries.row(i).array().abs() > rho_star).count();
  }
  return d;
}

double rho_at_degree(const HMatrix& H, Index i, Index delta) {
  check_delta(delta, H.q());
  if (i < 0 || i >= H.p()) throw Error(ErrorCode::InvalidArgument, "variable index out of range");
  std::vector<double> scratch;
  return kth_largest_magnitude(H.entries.row(i), delta, scratch);
}

Vector row_order_statistics(const Matrix& M, Index delta) {
  check_delta(delta, M.cols());
  Vector out(M.rows());
  std::vector<double> scratch;
  for (Index i = 0; i < M.rows(); ++i) out(i) = kth_largest_magnitude(M.row(i), delta, scratch);
  return out;
}

ScreeningResult pcs_screen(const Matrix& X, const Matrix& Y, Index delta, const Selection& selection,
                           std::optional<double> rho_star) {
  if (X.rows() != Y.rows()) {
    throw Error(ErrorCode::RowCountMismatch, "X has " + std::to_string(X.rows()) +
                                                 " rows but Y has " + std::to_string(Y.rows()));
  }
  const Index n = X.rows();
  const Index p = X.cols();
  const Index q = Y.cols();
  check_delta(delta, q);
  if (const auto* top = std::get_if<TopK>(&selection); top && (top->k < 1 || top->k > p)) {
    throw Error(ErrorCode::InvalidArgument, "top-k must lie in [1, p=" + std::to_string(p) + "]");
  }

  const UScoreMatrix Ux = uscores(center_and_scale(X));
  const UScoreMatrix Uy = uscores(center_and_scale(Y));
  HMatrix H;
  try {
    H = h_matrix(Ux, Uy);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SingularGram) throw;
    H = h_matrix(u_tilde_pinv(Ux), Uy);
  }

  ScreeningResult result;
  result.params = ScreenParams{p, q, n, delta, 0.0};
  validate(result.params);

  if (rho_star) {
    result.rho_star = rho_star;
  } else {
    try {
      result.rho_star = critical_threshold(p, n, delta);
    } catch (const Error&) {
      result.rho_star.reset();
    }
  }
  std::vector<Index> deg;
  if (result.rho_star) deg = degrees(H, *result.rho_star);

  const Vector rho = row_order_statistics(H.entries, delta);
  result.variables.resize(static_cast<std::size_t>(p));
  ScreenParams at = result.params;
  for (Index i = 0; i < p; ++i) {
    auto& v = result.variables[static_cast<std::size_t>(i)];
    v.index = i;
    v.rho = rho(i);
    v.weight = H.weights(i);
    v.rho_mod = std::clamp(v.weight * v.rho, 0.0, 1.0);
    at.rho = v.rho_mod;
    v.pvalue = pvalue(xi(at));
    if (!deg.empty()) v.degree = deg[static_cast<std::size_t>(i)];
  }

  IndexSet order(static_cast<std::size_t>(p));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    const auto& va = result.variables[static_cast<std::size_t>(a)];
    const auto& vb = result.variables[static_cast<std::size_t>(b)];
    if (va.pvalue != vb.pvalue) return va.pvalue < vb.pvalue;
    if (va.rho_mod != vb.rho_mod) return va.rho_mod > vb.rho_mod;
    return a < b;
  });

  if (const auto* top = std::get_if<TopK>(&selection)) {
    order.resize(static_cast<std::size_t>(top->k));
  } else {
    const double alpha = std::get<SignificanceLevel>(selection).alpha;
    std::erase_if(order, [&](Index i) { return !(result.variables[static_cast<std::size_t>(i)].pvalue <= alpha); });
  }
  result.selected = std::move(order);
  return result;
}

Index discovery_count(const Matrix& correlations, Index delta, double rho) {
  const Vector r = row_order_statistics(correlations, delta);
  return (r.array() >= rho).count();
}

Index discovery_count(const UScoreMatrix& Ux, const UScoreMatrix& Uy, Index delta, double rho) {
  if (Ux.dim() != Uy.dim()) throw Error(ErrorCode::RowCountMismatch, "U-score dimensions differ");
  return discovery_count(Matrix(Ux.values.transpose() * Uy.values), delta, rho);
}

}  // namespace pcs
