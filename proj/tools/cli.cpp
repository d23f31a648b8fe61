#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pcs/config.hpp"
#include "pcs/csv.hpp"
#include "pcs/error.hpp"
#include "pcs/experiments.hpp"
#include "pcs/pcs.hpp"
#include "pcs/predict.hpp"
#include "pcs/screenstats.hpp"
#include "pcs/serialize.hpp"

namespace pcs::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<Index> threads;
  std::string config;

  std::string x_path;
  std::string y_path;
  Index delta = 1;
  std::optional<double> alpha;
  std::optional<Index> top_k;
  std::optional<double> rho_star;

  Index p = 0;
  Index n = 0;
  Index q = 1;
  std::optional<double> c;
};

bool is_input_error(ErrorCode code) {
  return code == ErrorCode::ParseError || code == ErrorCode::InvalidConfig || code == ErrorCode::RowCountMismatch;
}

int report(const Error& e, std::string_view stage, std::ostream& err) {
  err << "error in stage " << stage << ": " << e.what() << "\n";
  return is_input_error(e.code()) ? kUsage : kNumeric;
}

std::optional<fs::path> prepare_out_dir(const std::string& out, std::ostream& err) {
  if (out.empty()) return std::nullopt;
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec || !fs::is_directory(out)) {
    err << "error: cannot create output directory '" << out << "'\n";
    throw ExitCode::kUsage;
  }
  return fs::path(out);
}

void write_file(const fs::path& path, const std::string& text, std::ostream& err) {
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) {
    err << "error: cannot write '" << path.string() << "'\n";
    throw ExitCode::kUsage;
  }
}

int cmd_screen(const Options& o, std::ostream& out, std::ostream& err) {
  CsvMatrix X;
  CsvMatrix Y;
  try {
    X = read_csv_matrix(o.x_path);
    Y = read_csv_matrix(o.y_path);
  } catch (const Error& e) {
    return report(e, "load", err);
  }
  if (X.values.rows() != Y.values.rows()) {
    err << "error in stage load: RowCountMismatch: X has " << X.values.rows() << " rows, Y has "
        << Y.values.rows() << "\n";
    return kUsage;
  }
  Selection selection = SignificanceLevel{o.alpha.value_or(0.05)};
  if (o.top_k) selection = TopK{*o.top_k};

  ScreeningResult result;
  try {
    result = pcs_screen(X.values, Y.values, o.delta, selection, o.rho_star);
  } catch (const Error& e) {
    return report(e, "screen", err);
  }

  std::vector<bool> chosen(static_cast<std::size_t>(X.values.cols()), false);
  for (const Index i : result.selected) chosen[static_cast<std::size_t>(i)] = true;
  std::ostringstream table;
  write_csv_row(table, {"index", "rho", "weight", "rho_mod", "pvalue", "degree", "selected"});
  for (const auto& v : result.variables) {
    write_csv_row(table, {std::to_string(v.index), format_double(v.rho), format_double(v.weight),
                          format_double(v.rho_mod), format_double(v.pvalue),
                          v.degree ? std::to_string(*v.degree) : std::string(),
                          chosen[static_cast<std::size_t>(v.index)] ? "1" : "0"});
  }

  const auto dir = prepare_out_dir(o.out, err);
  if (!dir) {
    out << table.str();
    return kOk;
  }
  write_file(*dir / "screening.csv", table.str(), err);
  if (!result.selected.empty()) {
    try {
      const PredictorModel model = fit_on_support(X.values, Y.values, result.selected);
      write_file(*dir / "model.json", model_to_json(model).dump(2) + "\n", err);
    } catch (const Error& e) {
      return report(e, "fit", err);
    }
  }
  return kOk;
}

int cmd_experiment(const Options& o, std::ostream& out, std::ostream& err) {
  ExperimentConfig config;
  try {
    config = load_config(o.config);
    if (o.seed) config.seed = *o.seed;
    if (o.threads) config.threads = *o.threads;
    validate(config);
  } catch (const Error& e) {
    report(e, "config", err);
    return kUsage;
  }
  ExperimentTable table;
  try {
    table = run_experiment(config);
  } catch (const Error& e) {
    return report(e, std::string("experiment ") + std::string(to_string(config.kind)), err);
  }
  const std::string csv = to_csv(table);
  const auto dir = prepare_out_dir(o.out, err);
  if (dir) {
    write_file(*dir / (config.name + ".csv"), csv, err);
    write_file(*dir / (config.name + ".json"), sidecar_json(config, table).dump(2) + "\n", err);
  } else {
    out << csv;
  }
  if (table.success_fraction() < 0.9) {
    err << "error: only " << format_double(table.success_fraction()) << " of trial evaluations succeeded\n";
    return kTrials;
  }
  return kOk;
}

int cmd_critical(const Options& o, std::ostream& out, std::ostream& err) {
  double rho_c = 0.0;
  std::vector<std::vector<std::string>> rows;
  try {
    rho_c = critical_threshold(o.p, o.n, o.delta, o.c);
    auto add = [&](const std::string& label, double offset) {
      const double rho = std::clamp(rho_c + offset, 0.0, 1.0);
      const double value = xi(ScreenParams{o.p, o.q, o.n, o.delta, rho});
      rows.push_back({label, format_double(offset), format_double(rho), format_double(value)});
    };
    add("critical", 0.0);
    for (const double d : {-0.1, -0.05, -0.02, 0.0, 0.02, 0.05, 0.1}) add("grid", d);
  } catch (const Error& e) {
    return report(e, "critical", err);
  }
  write_csv_row(out, {"label", "offset", "rho", "xi"});
  for (const auto& r : rows) write_csv_row(out, r);
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Predictive correlation screening"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--seed", o.seed, "Master seed override");
  app.add_option("--out", o.out, "Output directory");
  app.add_option("--threads", o.threads, "Thread count hint")->check(CLI::PositiveNumber);
  app.add_option("--config", o.config, "Experiment config (TOML or JSON)");

  auto* screen = app.add_subcommand("screen", "Screen the columns of X against the responses Y");
  screen->add_option("--x", o.x_path, "Regressor CSV, rows are samples")->required();
  screen->add_option("--y", o.y_path, "Response CSV")->required();
  screen->add_option("--delta", o.delta, "Hub degree")->default_val(1);
  auto* alpha = screen->add_option("--alpha", o.alpha, "Keep variables with p-value <= alpha");
  auto* topk = screen->add_option("--top-k", o.top_k, "Keep the k best-ranked variables");
  alpha->excludes(topk);
  screen->add_option("--rho-star", o.rho_star, "Degree threshold (default: critical threshold)");

  auto* experiment = app.add_subcommand("experiment", "Run a Monte Carlo experiment from a config");

  auto* critical = app.add_subcommand("critical", "Print the critical threshold and nearby xi values");
  critical->add_option("--p", o.p, "Number of regressors")->required();
  critical->add_option("--n", o.n, "Number of samples")->required();
  critical->add_option("--delta", o.delta, "Hub degree")->default_val(1);
  critical->add_option("--c", o.c, "Critical constant (default a_n * delta)");
  critical->add_option("--q", o.q, "Number of responses")->default_val(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*screen) return cmd_screen(o, out, err);
    if (*experiment) {
      if (o.config.empty()) {
        err << "error: experiment needs --config\n";
        return kUsage;
      }
      return cmd_experiment(o, out, err);
    }
    if (*critical) return cmd_critical(o, out, err);
  } catch (ExitCode code) {
    return code;
  } catch (const Error& e) {
    return report(e, "cli", err);
  }
  return kUsage;
}

}  // namespace pcs::cli
