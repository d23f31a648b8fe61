#include <doctest.h>

#include <cmath>

#include "pcs/error.hpp"
#include "pcs/lasso.hpp"
#include "pcs/predict.hpp"
#include "pcs/uscore.hpp"
#include "support.hpp"

using namespace pcs;
using testing::random_matrix;

namespace {

// Columns orthogonal, centered, with sample variance 1.
Matrix orthonormal_design(Index n, Index p) {
  return helmert_basis(n).transpose().leftCols(p) * std::sqrt(static_cast<double>(n - 1));
}

double soft(double z, double g) { return z > g ? z - g : (z < -g ? z + g : 0.0); }

}  // namespace

TEST_SUITE("lasso") {
  TEST_CASE("lambda above lambda_max kills every coefficient") {
    const Matrix X = random_matrix(30, 12, 1);
    const Matrix y = random_matrix(30, 1, 2);
    const double lmax = lasso_lambda_max(X, y);
    CHECK(lmax == doctest::Approx((X.transpose() * y).cwiseAbs().maxCoeff() / 30.0));
    CHECK(lasso_fit(X, y.col(0), lmax * 1.0001).coefficients.cwiseAbs().maxCoeff() == 0.0);
    CHECK(lasso_fit(X, y.col(0), lmax * 0.9).coefficients.cwiseAbs().maxCoeff() > 0.0);
  }

  TEST_CASE("orthonormal design matches soft thresholding") {
    const Index n = 40, p = 15;
    const Matrix X = orthonormal_design(n, p);
    const Vector y = random_matrix(n, 1, 3).col(0);
    const double col_sq = (n - 1.0) / n;
    for (double lambda : {0.01, 0.05, 0.1, 0.2}) {
      const Vector b = lasso_fit(X, y, lambda).coefficients;
      for (Index j = 0; j < p; ++j) {
        const double z = X.col(j).dot(y) / n;
        CHECK(std::abs(b(j) - soft(z, lambda) / col_sq) < 1e-10);
      }
    }
  }

  TEST_CASE("lasso_select on an orthonormal design ranks by soft threshold") {
    const Index n = 40, p = 20;
    const Matrix X = orthonormal_design(n, p);
    const Vector y = random_matrix(n, 1, 4).col(0);
    const Vector z = (X.transpose() * y).cwiseAbs();
    for (Index k : {1, 3, 6}) {
      CHECK(lasso_select(X, y, k).selected == top_k_by_score(z, k));
    }
  }

  TEST_CASE("strong planted variable enters first") {
    const Matrix X = random_matrix(30, 50, 5);
    const Matrix y = 4.0 * X.col(17) + 0.3 * X.col(2) + 0.2 * random_matrix(30, 1, 6);
    const LassoSelection s = lasso_select(X, y, 1);
    CHECK(s.selected == IndexSet{17});
    CHECK(s.active >= 1);
  }

  TEST_CASE("lasso_select returns exactly k even when the path saturates") {
    const Matrix X = random_matrix(10, 60, 7);
    const Matrix Y = random_matrix(10, 3, 8);
    const LassoSelection s = lasso_select(X, Y, 25);
    CHECK(s.selected.size() == 25);
    IndexSet sorted = s.selected;
    std::sort(sorted.begin(), sorted.end());
    CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
  }

  TEST_CASE("KKT conditions at the solution") {
    const Matrix X = center_and_scale(random_matrix(25, 40, 9));
    const Vector y = random_matrix(25, 1, 10).col(0);
    const double lambda = 0.3 * lasso_lambda_max(X, y);
    const LassoFit fit = lasso_fit(X, y, lambda);
    CHECK(fit.converged);
    const Vector grad = X.transpose() * (y - X * fit.coefficients) / 25.0;
    for (Index j = 0; j < 40; ++j) {
      if (fit.coefficients(j) != 0.0) {
        CHECK(std::abs(grad(j) - lambda * (fit.coefficients(j) > 0 ? 1.0 : -1.0)) < 1e-5);
      } else {
        CHECK(std::abs(grad(j)) <= lambda + 1e-5);
      }
    }
  }

  TEST_CASE("strict mode reports non-convergence") {
    LassoOptions opts;
    opts.max_sweeps = 1;
    opts.strict = true;
    const Matrix X = random_matrix(20, 30, 11);
    const Vector y = random_matrix(20, 1, 12).col(0);
    try {
      lasso_fit(X, y, 0.01 * lasso_lambda_max(X, y), opts);
      FAIL("expected NoConvergence");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NoConvergence);
    }
    opts.strict = false;
    CHECK(!lasso_fit(X, y, 0.01 * lasso_lambda_max(X, y), opts).converged);
  }
}
