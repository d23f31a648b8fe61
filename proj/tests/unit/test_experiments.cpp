#include <doctest.h>

#include <cmath>
#include <numeric>

#include "pcs/error.hpp"
#include "pcs/experiments.hpp"
#include "pcs/screenstats.hpp"

using namespace pcs;

namespace {

const ExperimentRow& row_at(const ExperimentTable& t, double grid, const std::string& method) {
  for (const auto& r : t.rows)
    if (r.grid_value == grid && r.method == method) return r;
  throw std::runtime_error("missing row");
}

ExperimentConfig small_phase(Index trials) {
  ExperimentConfig c;
  c.kind = ExperimentKind::PhaseTransition;
  c.synth.p = 300;
  c.synth.q = 3;
  c.synth.n = 8;
  c.grid = {0.0, 0.5, 0.7, 0.8, 0.9, 0.95, 1.0};
  c.trials = trials;
  c.seed = 5;
  return c;
}

}  // namespace

TEST_SUITE("experiments") {
  TEST_CASE("pairwise sum and summary") {
    std::vector<double> v(1000);
    std::iota(v.begin(), v.end(), 1.0);
    CHECK(pairwise_sum(v) == 500500.0);
    CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
    const Summary s = summarize(std::vector<double>{1, 2, 3, 4});
    CHECK(s.mean == 2.5);
    CHECK(s.std_error == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
    CHECK(s.count == 4);
    CHECK(summarize(std::vector<double>{7}).std_error == 0.0);
  }

  TEST_CASE("symmetric difference size") {
    CHECK(symmetric_difference_size({1, 2, 3}, {3, 2, 1}) == 0);
    CHECK(symmetric_difference_size({1, 2, 3}, {2, 3, 4}) == 2);
    CHECK(symmetric_difference_size({}, {5, 6}) == 2);
  }

  TEST_CASE("names round-trip and unknown names are rejected") {
    for (auto k : {ExperimentKind::Misselection, ExperimentKind::Fwer, ExperimentKind::TwoStageMse,
                   ExperimentKind::PhaseTransition, ExperimentKind::PoissonLimit})
      CHECK(parse_experiment_kind(to_string(k)) == k);
    for (auto m : {Method::Pcs, Method::Lasso, Method::CorrelationLearning, Method::Oracle})
      CHECK(parse_method(to_string(m)) == m);
    CHECK(parse_design("block_sparse") == Design::BlockSparse);
    CHECK_THROWS_AS(parse_experiment_kind("bogus"), Error);
    CHECK_THROWS_AS(parse_method("ridge"), Error);
  }

  TEST_CASE("config validation") {
    ExperimentConfig c = small_phase(3);
    CHECK_NOTHROW(validate(c));
    c.trials = 0;
    CHECK_THROWS_AS(validate(c), Error);
    c = small_phase(3);
    c.grid = {0.5, 0.2};
    CHECK_THROWS_AS(validate(c), Error);
    c.grid.clear();
    CHECK_THROWS_AS(validate(c), Error);
    c = small_phase(3);
    c.delta = 4;
    CHECK_THROWS_AS(validate(c), Error);
  }

  TEST_CASE("separable misselection instance has no errors") {
    ExperimentConfig c;
    c.kind = ExperimentKind::Misselection;
    c.design = Design::BlockSparse;
    c.synth.p = 60;
    c.synth.q = 1;
    c.synth.k = 1;
    c.synth.noise_var = 0.0;
    c.grid = {40};
    c.trials = 10;
    c.methods = {Method::Pcs, Method::Lasso, Method::CorrelationLearning};
    const ExperimentTable t = run_misselection(c);
    REQUIRE(t.rows.size() == 3);
    for (const auto& r : t.rows) {
      CHECK(r.mean == 0.0);
      CHECK(r.trials == 10);
      CHECK(r.failures == 0);
    }
  }

  TEST_CASE("PCS beats LASSO at the smallest sample sizes") {
    ExperimentConfig c;
    c.kind = ExperimentKind::Misselection;
    c.design = Design::Identity;
    c.synth.p = 200;
    c.synth.q = 20;
    c.synth.activation_prob = 0.1;
    c.grid = {4, 6};
    c.trials = 100;
    c.methods = {Method::Pcs, Method::Lasso};
    const ExperimentTable t = run_misselection(c);
    for (double n : c.grid) {
      const auto& pcs = row_at(t, n, "pcs");
      const auto& lasso = row_at(t, n, "lasso");
      MESSAGE("n=" << n << " pcs " << pcs.mean << " lasso " << lasso.mean);
      CHECK(pcs.mean <= lasso.mean + 2 * std::hypot(pcs.std_error, lasso.std_error));
    }
  }

  TEST_CASE("same config and seed give identical tables under any thread hint") {
    ExperimentConfig c;
    c.kind = ExperimentKind::Misselection;
    c.design = Design::BlockSparse;
    c.synth.p = 80;
    c.synth.k = 4;
    c.synth.block_corr = 0.3;
    c.grid = {10, 20};
    c.trials = 12;
    c.methods = {Method::Pcs, Method::CorrelationLearning, Method::Lasso};
    const std::string one = to_csv(run_misselection(c));
    CHECK(one == to_csv(run_misselection(c)));
    c.threads = 3;
    CHECK(one == to_csv(run_misselection(c)));
    c.seed = 2;
    CHECK(one != to_csv(run_misselection(c)));
  }

  TEST_CASE("table covers the full grid x method product") {
    ExperimentConfig c;
    c.kind = ExperimentKind::TwoStageMse;
    c.synth.p = 60;
    c.synth.k = 3;
    c.grid = {30, 50};
    c.trials = 4;
    c.test_size = 50;
    c.methods = {Method::Pcs, Method::CorrelationLearning, Method::Oracle};
    const ExperimentTable t = run_two_stage_mse(c);
    CHECK(t.rows.size() == 6);
    CHECK(t.grid_name == "t");
    const std::string csv = to_csv(t);
    CHECK(csv.rfind("t,method,mean,std_error,trials,failures,reference\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
    CHECK(csv.find('\r') == std::string::npos);
    CHECK(t.metadata.size() == 2);
  }

  TEST_CASE("FWER vanishes on a well-separated noiseless instance") {
    ExperimentConfig c;
    c.kind = ExperimentKind::Fwer;
    c.synth.p = 100;
    c.synth.k = 3;
    c.synth.sigma_bg = 0.0;
    c.synth.block_corr = 0.0;
    c.grid = {20, 60, 150};
    c.trials = 60;
    const ExperimentTable t = run_fwer(c);
    CHECK(row_at(t, 150, "pcs").mean <= 0.05);
  }

  TEST_CASE("oracle support gives the lowest two-stage MSE") {
    ExperimentConfig c;
    c.kind = ExperimentKind::TwoStageMse;
    c.synth.p = 200;
    c.synth.k = 5;
    c.synth.block_corr = 0.2;
    c.grid = {100, 200};
    c.trials = 20;
    c.test_size = 100;
    c.methods = {Method::Pcs, Method::CorrelationLearning, Method::Lasso, Method::Oracle};
    const ExperimentTable t = run_two_stage_mse(c);
    for (double g : c.grid) {
      const auto& oracle = row_at(t, g, "oracle");
      for (const char* m : {"pcs", "correlation", "lasso"}) {
        const auto& other = row_at(t, g, m);
        CHECK(oracle.mean <= other.mean + 2 * std::hypot(oracle.std_error, other.std_error));
      }
    }
  }

  TEST_CASE("phase transition endpoints, monotonicity and overlay") {
    const ExperimentTable t = run_phase_transition(small_phase(30));
    CHECK(row_at(t, 0.0, "discoveries").mean == 300.0);
    CHECK(row_at(t, 1.0, "discoveries").mean == 0.0);
    double last = INFINITY;
    for (const auto& r : t.rows) {
      CHECK(r.mean <= last);
      last = r.mean;
      REQUIRE(r.reference.has_value());
      CHECK(*r.reference == doctest::Approx(xi({300, 3, 8, 1, r.grid_value})));
    }
    CHECK(t.metadata.at(0).first == "rho_c");
  }

  TEST_CASE("relative grid is measured from rho_c") {
    ExperimentConfig c = small_phase(2);
    c.grid = {-0.05, 0.0, 0.05};
    c.relative_grid = true;
    const ExperimentTable t = run_phase_transition(c);
    const double rc = critical_threshold(300, 8, 1);
    CHECK(t.rows[1].grid_value == doctest::Approx(rc));
    CHECK(t.rows[0].grid_value == doctest::Approx(rc - 0.05));
  }

  TEST_CASE("standard errors shrink like one over root m") {
    const ExperimentTable a = run_phase_transition(small_phase(200));
    const ExperimentTable b = run_phase_transition(small_phase(400));
    const double ratio = row_at(b, 0.7, "discoveries").std_error / row_at(a, 0.7, "discoveries").std_error;
    CHECK(ratio == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.15));
  }

  TEST_CASE("Poisson limit extremes") {
    ExperimentConfig c;
    c.kind = ExperimentKind::PoissonLimit;
    c.synth.p = 500;
    c.synth.q = 1;
    c.synth.n = 10;
    c.grid = {1e-6, 50.0};
    c.trials = 100;
    const ExperimentTable t = run_poisson_limit(c);
    CHECK(row_at(t, 1e-6, "empirical").mean <= 0.02);
    CHECK(row_at(t, 50.0, "empirical").mean == 1.0);
    CHECK(*row_at(t, 50.0, "empirical").reference == doctest::Approx(1.0));
  }
}
