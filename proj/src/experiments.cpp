#include "pcs/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <iterator>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "pcs/csv.hpp"
#include "pcs/error.hpp"
#include "pcs/pcs.hpp"
#include "pcs/predict.hpp"
#include "pcs/screenstats.hpp"
#include "pcs/uscore.hpp"

namespace pcs {

namespace {

using Clock = std::chrono::steady_clock;

// Stream tags inside one trial seed.
enum Stream : std::uint64_t { kRegressors = 1, kResponseX = 2, kCoefficients = 3, kNoise = 4 };

struct TrialOutput {
  std::vector<std::optional<double>> values;  // grid-major, one slot per (grid point, label)
  std::vector<double> seconds;                // per label
};

template <class Fn>
std::vector<TrialOutput> run_trials(Index trials, Index threads, Fn&& fn) {
  std::vector<TrialOutput> out(static_cast<std::size_t>(trials));
  std::atomic<Index> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const Index i = next.fetch_add(1);
      if (i >= trials) return;
      try {
        out[static_cast<std::size_t>(i)] = fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const Index workers = std::clamp<Index>(threads, 1, std::max<Index>(trials, 1));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (Index w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

template <class Fn>
std::optional<double> timed(Fn&& fn, double& seconds) {
  const auto start = Clock::now();
  std::optional<double> value;
  try {
    value = fn();
  } catch (const Error&) {
    value.reset();
  }
  seconds += std::chrono::duration<double>(Clock::now() - start).count();
  return value;
}

ExperimentTable aggregate(const ExperimentConfig& config, std::string grid_name, const std::vector<double>& grid,
                          const std::vector<std::string>& labels, const std::vector<TrialOutput>& outputs,
                          const std::function<std::optional<double>(std::size_t)>& reference = {}) {
  ExperimentTable table;
  table.experiment = config.name.empty() ? std::string(to_string(config.kind)) : config.name;
  table.grid_name = std::move(grid_name);
  std::vector<double> values;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    for (std::size_t m = 0; m < labels.size(); ++m) {
      values.clear();
      Index failures = 0;
      for (const auto& trial : outputs) {
        const auto& v = trial.values[g * labels.size() + m];
        if (v) {
          values.push_back(*v);
        } else {
          ++failures;
        }
      }
      const Summary s = summarize(values);
      ExperimentRow row;
      row.grid_value = grid[g];
      row.method = labels[m];
      row.mean = s.mean;
      row.std_error = s.std_error;
      row.trials = s.count;
      row.failures = failures;
      if (reference) row.reference = reference(g);
      table.rows.push_back(std::move(row));
      table.units += static_cast<Index>(outputs.size());
      table.failed_units += failures;
    }
  }
  for (std::size_t m = 0; m < labels.size(); ++m) {
    std::vector<double> secs;
    for (const auto& trial : outputs) {
      if (m < trial.seconds.size()) secs.push_back(trial.seconds[m]);
    }
    table.seconds_by_method.emplace_back(labels[m], pairwise_sum(secs));
  }
  return table;
}

std::vector<std::string> method_labels(const ExperimentConfig& config) {
  std::vector<std::string> labels;
  for (const Method m : config.methods) labels.emplace_back(to_string(m));
  return labels;
}

IndexSet select_with(Method method, const Matrix& X, const Matrix& Y, Index k, const IndexSet& truth,
                     const ExperimentConfig& config) {
  switch (method) {
    case Method::Pcs: return pcs_screen(X, Y, config.delta, TopK{k}).selected;
    case Method::Lasso: return lasso_select(X, Y, k, config.lasso).selected;
    case Method::CorrelationLearning: return correlation_select(X, Y, k);
    case Method::Oracle: return truth;
  }
  return {};
}

Screener screener_for(Method method, const IndexSet& truth, const ExperimentConfig& config) {
  switch (method) {
    case Method::Pcs: return pcs_screener();
    case Method::Lasso: return lasso_screener(config.lasso);
    case Method::CorrelationLearning: return correlation_screener();
    case Method::Oracle: return fixed_support_screener(truth);
  }
  return pcs_screener();
}

Index grid_count(double value, const char* what) {
  const double r = std::round(value);
  if (!(r >= 1.0) || std::abs(r - value) > 1e-9) {
    throw Error(ErrorCode::InvalidConfig, std::string(what) + " grid values must be positive integers");
  }
  return static_cast<Index>(r);
}

struct LinearSample {
  Matrix X;
  Matrix Y;
  IndexSet truth;
};

LinearSample draw_block_sparse(const SynthSpec& s, Index rows, std::uint64_t seed, bool bernoulli_gaussian) {
  LinearSample out;
  auto bs = gen_block_sparse(rows, s.p, s.k, s.block_corr, derive_seed(seed, kRegressors));
  out.X = std::move(bs.X);
  out.truth = std::move(bs.active);
  Matrix A = Matrix::Zero(s.q, s.p);
  if (bernoulli_gaussian) {
    const Vector a = gen_coeff_bernoulli_gaussian(s.k * s.q, s.sigma_bg, derive_seed(seed, kCoefficients));
    Index next = 0;
    for (const Index j : out.truth) {
      for (Index r = 0; r < s.q; ++r) A(r, j) = a(next++);
    }
  } else {
    A = gen_coeff_on_support(s.p, s.q, out.truth, derive_seed(seed, kCoefficients));
  }
  out.Y = gen_response(out.X, A, s.noise_var, derive_seed(seed, kNoise));
  return out;
}

LinearSample draw_identity(const SynthSpec& s, Index rows, std::uint64_t seed) {
  LinearSample out;
  out.X = gen_gaussian_iid(rows, s.p, derive_seed(seed, kRegressors));
  auto coeff = gen_coeff_activation(s.p, s.q, s.activation_prob, derive_seed(seed, kCoefficients));
  out.truth = std::move(coeff.active);
  out.Y = gen_response(out.X, coeff.A, s.noise_var, derive_seed(seed, kNoise));
  return out;
}

void null_scores(const ExperimentConfig& c, std::uint64_t seed, Vector& order_stats) {
  const Matrix X = gen_gaussian_iid(c.synth.n, c.synth.p, derive_seed(seed, kRegressors));
  const Matrix Y = gen_gaussian_iid(c.synth.n, c.synth.q, derive_seed(seed, kResponseX));
  const UScoreMatrix Ux = uscores(X);
  const UScoreMatrix Uy = uscores(Y);
  order_stats = row_order_statistics(Ux.values.transpose() * Uy.values, c.delta);
}

std::string metadata_key(std::string_view prefix, double value) {
  return std::string(prefix) + format_double(value);
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Misselection: return "misselection";
    case ExperimentKind::Fwer: return "fwer";
    case ExperimentKind::TwoStageMse: return "two_stage_mse";
    case ExperimentKind::PhaseTransition: return "phase_transition";
    case ExperimentKind::PoissonLimit: return "poisson_limit";
  }
  return "unknown";
}

std::string_view to_string(Method method) {
  switch (method) {
    case Method::Pcs: return "pcs";
    case Method::Lasso: return "lasso";
    case Method::CorrelationLearning: return "correlation";
    case Method::Oracle: return "oracle";
  }
  return "unknown";
}

std::string_view to_string(Design design) {
  return design == Design::Identity ? "identity" : "block_sparse";
}

ExperimentKind parse_experiment_kind(std::string_view name) {
  for (const auto k : {ExperimentKind::Misselection, ExperimentKind::Fwer, ExperimentKind::TwoStageMse,
                       ExperimentKind::PhaseTransition, ExperimentKind::PoissonLimit}) {
    if (name == to_string(k)) return k;
  }
  throw Error(ErrorCode::InvalidConfig, "unknown experiment '" + std::string(name) + "'");
}

Method parse_method(std::string_view name) {
  for (const auto m : {Method::Pcs, Method::Lasso, Method::CorrelationLearning, Method::Oracle}) {
    if (name == to_string(m)) return m;
  }
  throw Error(ErrorCode::InvalidConfig, "unknown method '" + std::string(name) + "'");
}

Design parse_design(std::string_view name) {
  if (name == "identity") return Design::Identity;
  if (name == "block_sparse") return Design::BlockSparse;
  throw Error(ErrorCode::InvalidConfig, "unknown design '" + std::string(name) + "'");
}

void validate(const ExperimentConfig& config) {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidConfig, msg); };
  if (config.trials < 1) fail("trials must be at least 1");
  if (config.grid.empty()) fail("grid must be non-empty");
  if (!std::is_sorted(config.grid.begin(), config.grid.end())) fail("grid must be sorted ascending");
  if (config.methods.empty() && (config.kind == ExperimentKind::Misselection || config.kind == ExperimentKind::Fwer ||
                                 config.kind == ExperimentKind::TwoStageMse)) {
    fail("methods must be non-empty");
  }
  if (config.threads < 1) fail("threads must be at least 1");
  if (config.delta < 1 || config.delta > config.synth.q) fail("delta must lie in [1, q]");
  if (config.test_size < 1) fail("test_size must be at least 1");
  if (!(config.allocation_c > 0.0)) fail("allocation_c must be positive");
  try {
    validate(config.synth);
  } catch (const Error& e) {
    fail(std::string("synth: ") + e.what());
  }
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (const double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

Summary summarize(std::span<const double> values) {
  Summary s;
  s.count = static_cast<Index>(values.size());
  if (values.empty()) return s;
  s.mean = pairwise_sum(values) / static_cast<double>(values.size());
  if (values.size() > 1) {
    std::vector<double> sq;
    sq.reserve(values.size());
    for (const double v : values) sq.push_back((v - s.mean) * (v - s.mean));
    const double var = pairwise_sum(sq) / static_cast<double>(values.size() - 1);
    s.std_error = std::sqrt(var / static_cast<double>(values.size()));
  }
  return s;
}

Index symmetric_difference_size(IndexSet a, IndexSet b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  IndexSet diff;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(diff));
  return static_cast<Index>(diff.size());
}

void write_csv(const ExperimentTable& table, std::ostream& out) {
  write_csv_row(out, {table.grid_name, "method", "mean", "std_error", "trials", "failures", "reference"});
  for (const auto& row : table.rows) {
    write_csv_row(out, {format_double(row.grid_value), row.method, format_double(row.mean),
                        format_double(row.std_error), std::to_string(row.trials), std::to_string(row.failures),
                        row.reference ? format_double(*row.reference) : std::string()});
  }
}

std::string to_csv(const ExperimentTable& table) {
  std::ostringstream out;
  write_csv(table, out);
  return out.str();
}

ExperimentTable run_misselection(const ExperimentConfig& config) {
  validate(config);
  const auto labels = method_labels(config);
  const std::size_t M = labels.size();
  auto outputs = run_trials(config.trials, config.threads, [&](Index trial) {
    TrialOutput out;
    out.values.assign(config.grid.size() * M, std::nullopt);
    out.seconds.assign(M, 0.0);
    for (std::size_t g = 0; g < config.grid.size(); ++g) {
      const Index n = grid_count(config.grid[g], "misselection n");
      const std::uint64_t seed = derive_seed(config.seed, g, static_cast<std::uint64_t>(trial));
      LinearSample sample;
      try {
        sample = config.design == Design::Identity ? draw_identity(config.synth, n, seed)
                                                   : draw_block_sparse(config.synth, n, seed, false);
      } catch (const Error&) {
        continue;
      }
      const auto k = static_cast<Index>(sample.truth.size());
      for (std::size_t m = 0; m < M; ++m) {
        out.values[g * M + m] = timed(
            [&]() -> double {
              if (k == 0) return 0.0;
              const IndexSet picked = select_with(config.methods[m], sample.X, sample.Y, k, sample.truth, config);
              return static_cast<double>(symmetric_difference_size(picked, sample.truth));
            },
            out.seconds[m]);
      }
    }
    return out;
  });
  auto table = aggregate(config, "n", config.grid, labels, outputs);
  table.metadata.emplace_back("design_block_sparse", config.design == Design::BlockSparse ? 1.0 : 0.0);
  return table;
}

ExperimentTable run_fwer(const ExperimentConfig& config) {
  validate(config);
  const auto labels = method_labels(config);
  const std::size_t M = labels.size();
  auto outputs = run_trials(config.trials, config.threads, [&](Index trial) {
    TrialOutput out;
    out.values.assign(config.grid.size() * M, std::nullopt);
    out.seconds.assign(M, 0.0);
    for (std::size_t g = 0; g < config.grid.size(); ++g) {
      const Index n = grid_count(config.grid[g], "fwer n");
      const std::uint64_t seed = derive_seed(config.seed, g, static_cast<std::uint64_t>(trial));
      LinearSample sample;
      try {
        sample = draw_block_sparse(config.synth, n, seed, true);
      } catch (const Error&) {
        continue;
      }
      for (std::size_t m = 0; m < M; ++m) {
        out.values[g * M + m] = timed(
            [&]() -> double {
              IndexSet picked =
                  select_with(config.methods[m], sample.X, sample.Y, config.synth.k, sample.truth, config);
              return symmetric_difference_size(std::move(picked), sample.truth) == 0 ? 0.0 : 1.0;
            },
            out.seconds[m]);
      }
    }
    return out;
  });
  return aggregate(config, "n", config.grid, labels, outputs);
}

ExperimentTable run_two_stage_mse(const ExperimentConfig& config) {
  validate(config);
  const auto labels = method_labels(config);
  const std::size_t M = labels.size();
  std::vector<Index> stage1(config.grid.size());
  for (std::size_t g = 0; g < config.grid.size(); ++g) {
    const Index t = grid_count(config.grid[g], "two-stage t");
    TwoStagePlan plan{0, t, config.synth.p, config.synth.k, std::numeric_limits<double>::infinity(),
                      config.allocation_c};
    stage1[g] = std::min(allocation_rule(plan), t);
  }
  auto outputs = run_trials(config.trials, config.threads, [&](Index trial) {
    TrialOutput out;
    out.values.assign(config.grid.size() * M, std::nullopt);
    out.seconds.assign(M, 0.0);
    for (std::size_t g = 0; g < config.grid.size(); ++g) {
      const Index t = grid_count(config.grid[g], "two-stage t");
      const std::uint64_t seed = derive_seed(config.seed, g, static_cast<std::uint64_t>(trial));
      LinearSample sample;
      try {
        sample = draw_block_sparse(config.synth, t + config.test_size, seed, false);
      } catch (const Error&) {
        continue;
      }
      const Matrix Xtrain = sample.X.topRows(t);
      const Matrix Ytrain = sample.Y.topRows(t);
      const Matrix Xtest = sample.X.bottomRows(config.test_size);
      const Matrix Ytest = sample.Y.bottomRows(config.test_size);
      const TwoStageOptions opts{config.reuse_stage1};
      for (std::size_t m = 0; m < M; ++m) {
        out.values[g * M + m] = timed(
            [&]() -> double {
              const Screener screener = screener_for(config.methods[m], sample.truth, config);
              const PredictorModel model = two_stage_fit(Xtrain, Ytrain, stage1[g], config.synth.k, screener, opts);
              return empirical_mse(model, Xtest, Ytest);
            },
            out.seconds[m]);
      }
    }
    return out;
  });
  auto table = aggregate(config, "t", config.grid, labels, outputs);
  for (std::size_t g = 0; g < config.grid.size(); ++g) {
    table.metadata.emplace_back(metadata_key("stage1_n_at_t=", config.grid[g]), static_cast<double>(stage1[g]));
  }
  return table;
}

ExperimentTable run_phase_transition(const ExperimentConfig& config) {
  validate(config);
  const SynthSpec& s = config.synth;
  std::optional<double> rho_c;
  try {
    rho_c = critical_threshold(s.p, s.n, config.delta);
  } catch (const Error&) {
    rho_c.reset();
  }
  std::vector<double> grid = config.grid;
  if (config.relative_grid) {
    if (!rho_c) throw Error(ErrorCode::InvalidConfig, "relative grid needs a defined critical threshold");
    for (double& v : grid) v = std::clamp(*rho_c + v, 0.0, 1.0);
  }
  for (const double v : grid) {
    if (!(v >= 0.0 && v <= 1.0)) throw Error(ErrorCode::InvalidConfig, "rho grid values must lie in [0, 1]");
  }
  const std::vector<std::string> labels{"discoveries"};
  auto outputs = run_trials(config.trials, config.threads, [&](Index trial) {
    TrialOutput out;
    out.values.assign(grid.size(), std::nullopt);
    out.seconds.assign(1, 0.0);
    Vector order_stats;
    const auto start = Clock::now();
    try {
      null_scores(config, derive_seed(config.seed, 0, static_cast<std::uint64_t>(trial)), order_stats);
      for (std::size_t g = 0; g < grid.size(); ++g) {
        out.values[g] = static_cast<double>((order_stats.array() >= grid[g]).count());
      }
    } catch (const Error&) {
    }
    out.seconds[0] = std::chrono::duration<double>(Clock::now() - start).count();
    return out;
  });
  auto table = aggregate(config, "rho", grid, labels, outputs, [&](std::size_t g) -> std::optional<double> {
    return xi(ScreenParams{s.p, s.q, s.n, config.delta, grid[g]});
  });
  if (rho_c) table.metadata.emplace_back("rho_c", *rho_c);
  return table;
}

ExperimentTable run_poisson_limit(const ExperimentConfig& config) {
  validate(config);
  const SynthSpec& s = config.synth;
  std::vector<double> rho(config.grid.size());
  for (std::size_t g = 0; g < config.grid.size(); ++g) {
    if (!(config.grid[g] > 0.0)) throw Error(ErrorCode::InvalidConfig, "xi targets must be positive");
    rho[g] = rho_for_xi(s.p, s.q, s.n, config.delta, config.grid[g]);
  }
  const std::vector<std::string> labels{"empirical"};
  auto outputs = run_trials(config.trials, config.threads, [&](Index trial) {
    TrialOutput out;
    out.values.assign(config.grid.size(), std::nullopt);
    out.seconds.assign(1, 0.0);
    Vector order_stats;
    const auto start = Clock::now();
    try {
      null_scores(config, derive_seed(config.seed, 0, static_cast<std::uint64_t>(trial)), order_stats);
      for (std::size_t g = 0; g < rho.size(); ++g) {
        out.values[g] = (order_stats.array() >= rho[g]).any() ? 1.0 : 0.0;
      }
    } catch (const Error&) {
    }
    out.seconds[0] = std::chrono::duration<double>(Clock::now() - start).count();
    return out;
  });
  auto table = aggregate(config, "xi", config.grid, labels, outputs,
                         [&](std::size_t g) -> std::optional<double> { return pvalue(config.grid[g]); });
  for (std::size_t g = 0; g < rho.size(); ++g) {
    table.metadata.emplace_back(metadata_key("rho_at_xi=", config.grid[g]), rho[g]);
  }
  return table;
}

ExperimentTable run_experiment(const ExperimentConfig& config) {
  switch (config.kind) {
    case ExperimentKind::Misselection: return run_misselection(config);
    case ExperimentKind::Fwer: return run_fwer(config);
    case ExperimentKind::TwoStageMse: return run_two_stage_mse(config);
    case ExperimentKind::PhaseTransition: return run_phase_transition(config);
    case ExperimentKind::PoissonLimit: return run_poisson_limit(config);
  }
  throw Error(ErrorCode::InvalidConfig, "unknown experiment kind");
}

}  // namespace pcs
