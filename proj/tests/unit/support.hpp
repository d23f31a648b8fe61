#pragma once

#include <cmath>
#include <cstdint>

#include "pcs/matrix.hpp"
#include "pcs/synth.hpp"

namespace testing {

using pcs::Index;
using pcs::Matrix;
using pcs::Vector;

inline Matrix random_matrix(Index rows, Index cols, std::uint64_t seed) {
  return pcs::gen_gaussian_iid(rows, cols, seed);
}

// Textbook Pearson correlation by explicit sums.
inline double pearson(const Vector& a, const Vector& b) {
  const double n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (Index i = 0; i < a.size(); ++i) {
    ma += a(i);
    mb += b(i);
  }
  ma /= n;
  mb /= n;
  double sab = 0, saa = 0, sbb = 0;
  for (Index i = 0; i < a.size(); ++i) {
    sab += (a(i) - ma) * (b(i) - mb);
    saa += (a(i) - ma) * (a(i) - ma);
    sbb += (b(i) - mb) * (b(i) - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

inline Matrix pearson_matrix(const Matrix& X) {
  Matrix R(X.cols(), X.cols());
  for (Index i = 0; i < X.cols(); ++i)
    for (Index j = 0; j < X.cols(); ++j) R(i, j) = pearson(X.col(i), X.col(j));
  return R;
}

inline double brute_cov(const Vector& a, const Vector& b) {
  const double n = static_cast<double>(a.size());
  double ma = a.sum() / n, mb = b.sum() / n, s = 0;
  for (Index i = 0; i < a.size(); ++i) s += (a(i) - ma) * (b(i) - mb);
  return s / (n - 1);
}

inline double rel_frobenius(const Matrix& a, const Matrix& b) {
  const double denom = std::max(b.norm(), 1e-300);
  return (a - b).norm() / denom;
}

}  // namespace testing
