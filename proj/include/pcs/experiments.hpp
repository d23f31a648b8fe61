#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pcs/lasso.hpp"
#include "pcs/matrix.hpp"
#include "pcs/synth.hpp"

namespace pcs {

enum class ExperimentKind { Misselection, Fwer, TwoStageMse, PhaseTransition, PoissonLimit };
enum class Method { Pcs, Lasso, CorrelationLearning, Oracle };
/// Identity: i.i.d. regressors with activation-probability coefficients.
/// BlockSparse: correlated active block with exactly k active variables.
enum class Design { Identity, BlockSparse };

std::string_view to_string(ExperimentKind kind);
std::string_view to_string(Method method);
std::string_view to_string(Design design);
ExperimentKind parse_experiment_kind(std::string_view name);
Method parse_method(std::string_view name);
Design parse_design(std::string_view name);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Misselection;
  std::string name;  // output basename; empty means the kind name
  SynthSpec synth;   // synth.seed is ignored, trials derive from `seed`
  Design design = Design::Identity;
  std::vector<double> grid;     // n, t, rho or xi values depending on kind
  bool relative_grid = false;   // phase transition: grid holds offsets from rho_c
  Index trials = 10;
  std::vector<Method> methods{Method::Pcs};
  std::uint64_t seed = 1;
  Index threads = 1;  // hint only; results do not depend on it
  Index delta = 1;
  double allocation_c = 25.0;
  Index test_size = 200;
  bool reuse_stage1 = true;
  LassoOptions lasso;
};

/// Throws InvalidConfig with the offending field named.
void validate(const ExperimentConfig& config);

struct ExperimentRow {
  double grid_value = 0.0;
  std::string method;
  double mean = 0.0;
  double std_error = 0.0;
  Index trials = 0;    // successful trials behind mean
  Index failures = 0;  // trials that raised a library error
  std::optional<double> reference;  // analytic overlay where one exists
};

struct ExperimentTable {
  std::string experiment;
  std::string grid_name;
  std::vector<ExperimentRow> rows;
  std::vector<std::pair<std::string, double>> metadata;
  std::vector<std::pair<std::string, double>> seconds_by_method;  // wall clock, sidecar only
  Index units = 0;          // (grid point, trial, method) evaluations
  Index failed_units = 0;

  double success_fraction() const {
    return units == 0 ? 1.0 : 1.0 - static_cast<double>(failed_units) / static_cast<double>(units);
  }
};

/// Header `<grid>,method,mean,std_error,trials,failures,reference`, LF endings.
void write_csv(const ExperimentTable& table, std::ostream& out);
std::string to_csv(const ExperimentTable& table);

/// Pairwise summation with a fixed split order, so the result depends only
/// on the sequence of values.
double pairwise_sum(std::span<const double> values);

struct Summary {
  double mean = 0.0;
  double std_error = 0.0;  // sample sd / sqrt(count)
  Index count = 0;
};

Summary summarize(std::span<const double> values);

/// |a symmetric-difference b| for index sets.
Index symmetric_difference_size(IndexSet a, IndexSet b);

ExperimentTable run_misselection(const ExperimentConfig& config);
ExperimentTable run_fwer(const ExperimentConfig& config);
ExperimentTable run_two_stage_mse(const ExperimentConfig& config);
ExperimentTable run_phase_transition(const ExperimentConfig& config);
ExperimentTable run_poisson_limit(const ExperimentConfig& config);
ExperimentTable run_experiment(const ExperimentConfig& config);

}  // namespace pcs
