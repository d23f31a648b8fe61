#include "pcs/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "pcs/error.hpp"

namespace pcs {

namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

void fill_normal(Matrix& M, Rng& rng) {
  for (Index j = 0; j < M.cols(); ++j) {
    for (Index i = 0; i < M.rows(); ++i) M(i, j) = rng.normal();
  }
}

}  // namespace

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t Rng::next() {
  state_ += kGamma;
  return mix64(state_);
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) return 0;
  const std::uint64_t limit = max() - max() % bound;
  std::uint64_t x;
  do {
    x = next();
  } while (x >= limit);
  return x % bound;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  return mix64(mix64(master ^ mix64(a + kGamma)) + mix64(b + 2 * kGamma));
}

void validate(const SynthSpec& spec) {
  if (spec.p < 1 || spec.q < 1 || spec.n < 1) {
    throw Error(ErrorCode::InvalidArgument, "p, q and n must be positive");
  }
  if (!(spec.activation_prob >= 0.0 && spec.activation_prob <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "activation_prob must lie in [0, 1]");
  }
  if (!(spec.noise_var >= 0.0)) throw Error(ErrorCode::InvalidArgument, "noise_var must be nonnegative");
  if (!(spec.sigma_bg >= 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma_bg must be nonnegative");
  if (!(spec.block_corr >= 0.0 && spec.block_corr < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "block_corr must lie in [0, 1)");
  }
  if (spec.k < 1 || spec.k > spec.p) throw Error(ErrorCode::InvalidArgument, "k must lie in [1, p]");
}

Matrix gen_gaussian_iid(Index n, Index p, std::uint64_t seed) {
  Rng rng(seed);
  Matrix X(n, p);
  fill_normal(X, rng);
  return X;
}

Matrix block_covariance(Index p, const IndexSet& active, double block_corr) {
  Matrix sigma = Matrix::Identity(p, p);
  for (const Index a : active) {
    for (const Index b : active) {
      if (a != b) sigma(a, b) = block_corr;
    }
  }
  return sigma;
}

BlockSparseSample gen_block_sparse(Index n, Index p, Index k, double block_corr, std::uint64_t seed) {
  if (k < 1 || k > p) throw Error(ErrorCode::InvalidArgument, "k must lie in [1, p]");
  if (!(block_corr >= 0.0 && block_corr < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "block_corr must lie in [0, 1)");
  }
  Rng rng(seed);
  Matrix Z(n, p);
  fill_normal(Z, rng);

  IndexSet head(static_cast<std::size_t>(k));
  std::iota(head.begin(), head.end(), Index{0});
  const Matrix block = block_covariance(k, head, block_corr);
  const Eigen::LLT<Matrix> llt(block);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::InvalidArgument, "active block covariance is not positive definite");
  }
  const Matrix L = llt.matrixL();
  Z.leftCols(k) = Z.leftCols(k) * L.transpose();

  // Fisher-Yates: column j of the output is generated column perm[j].
  std::vector<Index> perm(static_cast<std::size_t>(p));
  std::iota(perm.begin(), perm.end(), Index{0});
  for (std::size_t i = perm.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(perm[i - 1], perm[j]);
  }

  BlockSparseSample out;
  out.X.resize(n, p);
  for (Index j = 0; j < p; ++j) {
    out.X.col(j) = Z.col(perm[static_cast<std::size_t>(j)]);
    if (perm[static_cast<std::size_t>(j)] < k) out.active.push_back(j);
  }
  return out;
}

CoefficientSample gen_coeff_activation(Index p, Index q, double activation_prob, std::uint64_t seed) {
  if (!(activation_prob >= 0.0 && activation_prob <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "activation_prob must lie in [0, 1]");
  }
  Rng rng(seed);
  CoefficientSample out;
  out.A = Matrix::Zero(q, p);
  for (Index j = 0; j < p; ++j) {
    if (rng.uniform() < activation_prob) {
      out.active.push_back(j);
      for (Index r = 0; r < q; ++r) out.A(r, j) = rng.normal();
    }
  }
  return out;
}

Matrix gen_coeff_on_support(Index p, Index q, const IndexSet& support, std::uint64_t seed) {
  Rng rng(seed);
  Matrix A = Matrix::Zero(q, p);
  for (const Index j : support) {
    if (j < 0 || j >= p) throw Error(ErrorCode::InvalidArgument, "support index out of range");
    for (Index r = 0; r < q; ++r) A(r, j) = rng.normal();
  }
  return A;
}

Vector gen_coeff_bernoulli_gaussian(Index k, double sigma_bg, std::uint64_t seed) {
  if (!(sigma_bg >= 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma_bg must be nonnegative");
  Rng rng(seed);
  Vector a(k);
  for (Index i = 0; i < k; ++i) {
    const double centre = (rng.next() >> 63) ? 1.0 : -1.0;
    a(i) = centre + sigma_bg * rng.normal();
  }
  return a;
}

Matrix gen_response(const Matrix& X, const Matrix& A, double noise_var, std::uint64_t seed) {
  if (A.cols() != X.cols()) {
    throw Error(ErrorCode::InvalidArgument, "A has " + std::to_string(A.cols()) + " columns but X has " +
                                                std::to_string(X.cols()));
  }
  if (!(noise_var >= 0.0)) throw Error(ErrorCode::InvalidArgument, "noise_var must be nonnegative");
  Matrix Y = X * A.transpose();
  if (noise_var > 0.0) {
    Rng rng(seed);
    Matrix noise(Y.rows(), Y.cols());
    fill_normal(noise, rng);
    Y += std::sqrt(noise_var) * noise;
  }
  return Y;
}

}  // namespace pcs
