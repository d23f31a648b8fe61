#pragma once

#include <cstdint>

#include "pcs/matrix.hpp"

namespace pcs {

/// SplitMix64: the i-th output is a fixed bijective mix of seed + i * golden
/// gamma, so a stream is fully determined by (seed, position) on every
/// platform. Gaussians use the Marsaglia polar method; both are implemented
/// here rather than taken from <random>, whose distributions are not
/// portable bit-for-bit.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()() { return next(); }
  std::uint64_t next();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Unbiased integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);
  double normal();

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t mix64(std::uint64_t z);

/// Independent stream seed for (master, a, b); used to give every trial and
/// every generator inside it its own reproducible stream.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0);

/// Parameters shared by the synthetic generators.
struct SynthSpec {
  Index p = 200;
  Index q = 1;
  Index n = 20;
  double activation_prob = 0.1;
  double noise_var = 0.05;
  Index k = 5;
  double sigma_bg = 0.1;
  double block_corr = 0.0;
  std::uint64_t seed = 1;
};

void validate(const SynthSpec& spec);

Matrix gen_gaussian_iid(Index n, Index p, std::uint64_t seed);

/// Block covariance: equicorrelated (block_corr) on `active`, identity elsewhere,
/// zero between the two blocks.
Matrix block_covariance(Index p, const IndexSet& active, double block_corr);

struct BlockSparseSample {
  Matrix X;
  IndexSet active;  // sorted ascending
};

/// Rows i.i.d. N(0, Sigma): the first k variables form the correlated block,
/// sampled through the Cholesky factor of the k x k block, and the columns are
/// then randomly permuted so the support lands at random positions.
BlockSparseSample gen_block_sparse(Index n, Index p, Index k, double block_corr, std::uint64_t seed);

struct CoefficientSample {
  Matrix A;         // q x p
  IndexSet active;  // active columns, ascending
};

/// Each column active with probability `activation_prob`; active columns have
/// i.i.d. N(0, 1) entries, inactive columns are zero.
CoefficientSample gen_coeff_activation(Index p, Index q, double activation_prob, std::uint64_t seed);

/// q x p matrix with i.i.d. N(0, 1) entries on the given columns, zero elsewhere.
Matrix gen_coeff_on_support(Index p, Index q, const IndexSet& support, std::uint64_t seed);

/// k draws of the mixture 0.5 N(1, sigma^2) + 0.5 N(-1, sigma^2).
Vector gen_coeff_bernoulli_gaussian(Index k, double sigma_bg, std::uint64_t seed);

/// Y = X A^T + noise with i.i.d. N(0, noise_var) entries.
Matrix gen_response(const Matrix& X, const Matrix& A, double noise_var, std::uint64_t seed);

}  // namespace pcs
