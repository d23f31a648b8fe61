#include <doctest.h>

#include <cmath>
#include <set>

#include "pcs/error.hpp"
#include "pcs/synth.hpp"
#include "support.hpp"

using namespace pcs;

TEST_SUITE("synth") {
  TEST_CASE("SplitMix64 reference stream") {
    // Published outputs of SplitMix64 seeded with 1234567.
    Rng rng(1234567);
    CHECK(rng.next() == 6457827717110365317ULL);
    CHECK(rng.next() == 3203168211198807973ULL);
    CHECK(rng.next() == 9817491932198370423ULL);
    CHECK(rng.next() == 4593380528125082431ULL);
    CHECK(rng.next() == 16408922859458223821ULL);
  }

  TEST_CASE("golden Gaussian draws") {
    Rng rng(42);
    const double golden[] = {0x1.f8c80e851c08cp-2,  -0x1.6354b5f7dce79p-1, -0x1.47f4af60c7f94p+0,
                             -0x1.cd98e78b167aep-1, -0x1.342959c9fa344p-1, 0x1.48fe9fcfdf274p-1};
    for (const double g : golden) CHECK(rng.normal() == g);
  }

  TEST_CASE("uniform and below stay in range") {
    Rng rng(7);
    for (int i = 0; i < 10000; ++i) {
      const double u = rng.uniform();
      CHECK(u >= 0.0);
      CHECK(u < 1.0);
      CHECK(rng.below(7) < 7);
    }
    // below() is unbiased: chi-square over 5 bins.
    std::vector<double> counts(5, 0.0);
    for (int i = 0; i < 100000; ++i) counts[rng.below(5)] += 1;
    double chi2 = 0;
    for (double c : counts) chi2 += (c - 20000) * (c - 20000) / 20000;
    CHECK(chi2 < 18.5);  // 0.999 quantile, 4 dof
  }

  TEST_CASE("derived seeds separate streams") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t a = 0; a < 50; ++a)
      for (std::uint64_t b = 0; b < 50; ++b) seen.insert(derive_seed(9, a, b));
    CHECK(seen.size() == 2500);
    CHECK(derive_seed(9, 1, 2) == derive_seed(9, 1, 2));
    CHECK(derive_seed(9, 1, 2) != derive_seed(10, 1, 2));
  }

  TEST_CASE("iid Gaussians: determinism and moments") {
    CHECK(gen_gaussian_iid(5, 4, 3) == gen_gaussian_iid(5, 4, 3));
    CHECK(gen_gaussian_iid(5, 4, 3) != gen_gaussian_iid(5, 4, 4));
    const Index n = 100000;
    const Matrix x = gen_gaussian_iid(n, 1, 11);
    const double mean = x.mean();
    const double var = (x.array() - mean).square().sum() / (n - 1);
    CHECK(std::abs(mean) < 4.0 / std::sqrt(static_cast<double>(n)));
    // sd of the sample variance is sqrt(2/n).
    CHECK(std::abs(var - 1.0) < 4.0 * std::sqrt(2.0 / n));
  }

  TEST_CASE("block covariance structure") {
    const IndexSet active{2, 5, 7};
    const Matrix S = block_covariance(10, active, 0.4);
    const std::set<Index> in(active.begin(), active.end());
    for (Index i = 0; i < 10; ++i) {
      for (Index j = 0; j < 10; ++j) {
        const bool ai = in.count(i) > 0, aj = in.count(j) > 0;
        if (i == j) CHECK(S(i, j) == 1.0);
        else if (ai && aj) CHECK(S(i, j) == 0.4);
        else CHECK(S(i, j) == 0.0);
      }
    }
    for (double r = 0.0; r < 1.0; r += 0.05) {
      Eigen::LLT<Matrix> llt(block_covariance(30, {0, 3, 4, 9, 10, 11, 20}, r));
      CHECK(llt.info() == Eigen::Success);
    }
  }

  TEST_CASE("block-sparse sample moments") {
    const Index n = 10000;
    const auto s = gen_block_sparse(n, 12, 4, 0.6, 21);
    REQUIRE(s.active.size() == 4);
    CHECK(std::is_sorted(s.active.begin(), s.active.end()));
    const std::set<Index> in(s.active.begin(), s.active.end());
    const Matrix C = sample_covariance(s.X);
    const double se = 1.0 / std::sqrt(static_cast<double>(n));
    for (Index i = 0; i < 12; ++i) {
      for (Index j = i + 1; j < 12; ++j) {
        const bool ai = in.count(i) > 0, aj = in.count(j) > 0;
        if (ai && aj) {
          CHECK(std::abs(testing::pearson(s.X.col(i), s.X.col(j)) - 0.6) < 0.03);
        } else if (ai != aj) {
          CHECK(std::abs(C(i, j)) < 4 * se);
        }
      }
    }
    CHECK(gen_block_sparse(30, 12, 4, 0.6, 21).X == gen_block_sparse(30, 12, 4, 0.6, 21).X);
  }

  TEST_CASE("zero block correlation has identity covariance") {
    const auto s = gen_block_sparse(20000, 6, 3, 0.0, 5);
    const Matrix C = sample_covariance(s.X);
    CHECK((C - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff() < 0.05);
  }

  TEST_CASE("support positions are spread over the columns") {
    std::vector<int> hits(20, 0);
    for (std::uint64_t seed = 0; seed < 2000; ++seed)
      for (const Index j : gen_block_sparse(3, 20, 2, 0.0, seed).active) ++hits[static_cast<std::size_t>(j)];
    for (const int h : hits) CHECK(h > 120);  // expected 200 each
  }

  TEST_CASE("activation-probability coefficients") {
    CHECK(gen_coeff_activation(50, 3, 0.0, 1).A.norm() == 0.0);
    const auto full = gen_coeff_activation(50, 3, 1.0, 1);
    CHECK(full.active.size() == 50);
    for (Index j = 0; j < 50; ++j) CHECK(full.A.col(j).norm() > 0.0);
    double total = 0;
    const Index draws = 1000, p = 200;
    for (std::uint64_t seed = 0; seed < draws; ++seed) {
      const auto c = gen_coeff_activation(p, 2, 0.1, seed);
      total += static_cast<double>(c.active.size());
      for (Index j = 0; j < p; ++j) {
        const bool on = std::binary_search(c.active.begin(), c.active.end(), j);
        if (!on) CHECK(c.A.col(j).norm() == 0.0);
      }
    }
    const double mean = total / draws;
    const double sd = std::sqrt(p * 0.1 * 0.9 / draws);
    CHECK(std::abs(mean - 0.1 * p) < 4 * sd);
  }

  TEST_CASE("Bernoulli-Gaussian coefficients") {
    for (const double v : gen_coeff_bernoulli_gaussian(100, 0.0, 3)) CHECK(std::abs(v) == 1.0);
    const Index k = 100000;
    const double sigma = 0.3;
    const Vector a = gen_coeff_bernoulli_gaussian(k, sigma, 4);
    const double m2 = 1 + sigma * sigma;
    CHECK(std::abs(a.mean()) < 4 * std::sqrt(m2 / k));
    const double second = a.squaredNorm() / k;
    // var(a^2) = E a^4 - (E a^2)^2 with E a^4 = 1 + 6 s^2 + 3 s^4.
    const double var2 = 1 + 6 * sigma * sigma + 3 * std::pow(sigma, 4) - m2 * m2;
    CHECK(std::abs(second - m2) < 4 * std::sqrt(var2 / k));
    CHECK(gen_coeff_bernoulli_gaussian(10, sigma, 4) == gen_coeff_bernoulli_gaussian(10, sigma, 4));
  }

  TEST_CASE("linear response model") {
    const Matrix X = gen_gaussian_iid(30, 5, 6);
    CHECK(gen_response(X, Matrix::Identity(5, 5), 0.0, 1) == X);
    const Matrix A1 = gen_gaussian_iid(2, 5, 7), A2 = gen_gaussian_iid(2, 5, 8);
    const Matrix sum = gen_response(X, A1 + A2, 0.0, 1);
    const Matrix parts = gen_response(X, A1, 0.0, 1) + gen_response(X, A2, 0.0, 1);
    CHECK((sum - parts).cwiseAbs().maxCoeff() < 1e-12);
    const Matrix noise = gen_response(gen_gaussian_iid(50000, 3, 9), Matrix::Zero(1, 3), 0.05, 10);
    const double var = (noise.array() - noise.mean()).square().sum() / (noise.size() - 1);
    CHECK(std::abs(var - 0.05) < 4 * 0.05 * std::sqrt(2.0 / 50000));
    CHECK_THROWS_AS(gen_response(X, Matrix::Zero(1, 4), 0.05, 1), Error);
  }

  TEST_CASE("SynthSpec validation") {
    SynthSpec s;
    CHECK_NOTHROW(validate(s));
    s.block_corr = 1.0;
    CHECK_THROWS_AS(validate(s), Error);
    s = SynthSpec{};
    s.activation_prob = 1.5;
    CHECK_THROWS_AS(validate(s), Error);
    s = SynthSpec{};
    s.k = s.p + 1;
    CHECK_THROWS_AS(validate(s), Error);
  }
}
