#include "pcs/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <toml.hpp>

#include "pcs/error.hpp"

namespace pcs {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorCode::InvalidConfig, msg); }

json node_to_json(const toml::node& node) {
  if (const auto* t = node.as_table()) {
    json out = json::object();
    for (const auto& [key, value] : *t) out[std::string(key.str())] = node_to_json(value);
    return out;
  }
  if (const auto* a = node.as_array()) {
    json out = json::array();
    for (const auto& value : *a) out.push_back(node_to_json(value));
    return out;
  }
  if (const auto* s = node.as_string()) return s->get();
  if (const auto* i = node.as_integer()) return i->get();
  if (const auto* f = node.as_floating_point()) return f->get();
  if (const auto* b = node.as_boolean()) return b->get();
  bad("unsupported TOML value type (dates and times are not accepted)");
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) bad("unknown key '" + it.key() + "' in " + where);
  }
}

const json* find(const json& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double get_number(const json& obj, const char* key, double fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_number()) bad(std::string("'") + key + "' must be a number");
  return v->get<double>();
}

Index get_count(const json& obj, const char* key, Index fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_number_integer()) bad(std::string("'") + key + "' must be an integer");
  return v->get<Index>();
}

bool get_bool(const json& obj, const char* key, bool fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_boolean()) bad(std::string("'") + key + "' must be a boolean");
  return v->get<bool>();
}

std::string get_string(const json& obj, const char* key, std::string fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_string()) bad(std::string("'") + key + "' must be a string");
  return v->get<std::string>();
}

std::uint64_t get_seed(const json& obj, const char* key, std::uint64_t fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (v->is_number_unsigned()) return v->get<std::uint64_t>();
  if (v->is_number_integer() && v->get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v->get<std::int64_t>());
  bad(std::string("'") + key + "' must be a non-negative integer");
}

}  // namespace

ExperimentConfig config_from_json(const json& doc) {
  if (!doc.is_object()) bad("config must be a table");
  reject_unknown(doc,
                 {"schema", "experiment", "name", "trials", "seed", "threads", "methods", "grid", "relative_grid",
                  "delta", "design", "synth", "two_stage", "lasso"},
                 "top level");
  if (const json* schema = find(doc, "schema")) {
    if (!schema->is_string() || schema->get<std::string>() != kConfigSchema) {
      bad("unsupported schema, expected '" + std::string(kConfigSchema) + "'");
    }
  }
  ExperimentConfig c;
  const json* kind = find(doc, "experiment");
  if (!kind || !kind->is_string()) bad("'experiment' is required");
  c.kind = parse_experiment_kind(kind->get<std::string>());
  c.name = get_string(doc, "name", std::string(to_string(c.kind)));
  c.trials = get_count(doc, "trials", c.trials);
  c.seed = get_seed(doc, "seed", c.seed);
  c.threads = get_count(doc, "threads", c.threads);
  c.relative_grid = get_bool(doc, "relative_grid", c.relative_grid);
  c.delta = get_count(doc, "delta", c.delta);
  c.design = parse_design(get_string(doc, "design", std::string(to_string(c.design))));

  if (const json* g = find(doc, "grid")) {
    if (!g->is_array()) bad("'grid' must be an array");
    for (const auto& v : *g) {
      if (!v.is_number()) bad("'grid' entries must be numbers");
      c.grid.push_back(v.get<double>());
    }
  }
  if (const json* m = find(doc, "methods")) {
    if (!m->is_array()) bad("'methods' must be an array");
    c.methods.clear();
    for (const auto& v : *m) {
      if (!v.is_string()) bad("'methods' entries must be strings");
      c.methods.push_back(parse_method(v.get<std::string>()));
    }
  }
  if (const json* s = find(doc, "synth")) {
    if (!s->is_object()) bad("'synth' must be a table");
    reject_unknown(*s, {"p", "q", "n", "k", "activation_prob", "noise_var", "sigma_bg", "block_corr"}, "[synth]");
    c.synth.p = get_count(*s, "p", c.synth.p);
    c.synth.q = get_count(*s, "q", c.synth.q);
    c.synth.n = get_count(*s, "n", c.synth.n);
    c.synth.k = get_count(*s, "k", c.synth.k);
    c.synth.activation_prob = get_number(*s, "activation_prob", c.synth.activation_prob);
    c.synth.noise_var = get_number(*s, "noise_var", c.synth.noise_var);
    c.synth.sigma_bg = get_number(*s, "sigma_bg", c.synth.sigma_bg);
    c.synth.block_corr = get_number(*s, "block_corr", c.synth.block_corr);
  }
  if (const json* t = find(doc, "two_stage")) {
    if (!t->is_object()) bad("'two_stage' must be a table");
    reject_unknown(*t, {"allocation_c", "test_size", "reuse_stage1"}, "[two_stage]");
    c.allocation_c = get_number(*t, "allocation_c", c.allocation_c);
    c.test_size = get_count(*t, "test_size", c.test_size);
    c.reuse_stage1 = get_bool(*t, "reuse_stage1", c.reuse_stage1);
  }
  if (const json* l = find(doc, "lasso")) {
    if (!l->is_object()) bad("'lasso' must be a table");
    reject_unknown(*l, {"tolerance", "max_sweeps", "path_length", "min_ratio"}, "[lasso]");
    c.lasso.tolerance = get_number(*l, "tolerance", c.lasso.tolerance);
    c.lasso.max_sweeps = get_count(*l, "max_sweeps", c.lasso.max_sweeps);
    c.lasso.path_length = get_count(*l, "path_length", c.lasso.path_length);
    c.lasso.min_ratio = get_number(*l, "min_ratio", c.lasso.min_ratio);
  }
  c.synth.seed = c.seed;
  validate(c);
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json methods = json::array();
  for (const Method m : c.methods) methods.push_back(std::string(to_string(m)));
  return json{
      {"schema", std::string(kConfigSchema)},
      {"experiment", std::string(to_string(c.kind))},
      {"name", c.name},
      {"trials", c.trials},
      {"seed", c.seed},
      {"threads", c.threads},
      {"methods", methods},
      {"grid", c.grid},
      {"relative_grid", c.relative_grid},
      {"delta", c.delta},
      {"design", std::string(to_string(c.design))},
      {"synth",
       {{"p", c.synth.p},
        {"q", c.synth.q},
        {"n", c.synth.n},
        {"k", c.synth.k},
        {"activation_prob", c.synth.activation_prob},
        {"noise_var", c.synth.noise_var},
        {"sigma_bg", c.synth.sigma_bg},
        {"block_corr", c.synth.block_corr}}},
      {"two_stage", {{"allocation_c", c.allocation_c}, {"test_size", c.test_size}, {"reuse_stage1", c.reuse_stage1}}},
      {"lasso",
       {{"tolerance", c.lasso.tolerance},
        {"max_sweeps", c.lasso.max_sweeps},
        {"path_length", c.lasso.path_length},
        {"min_ratio", c.lasso.min_ratio}}},
  };
}

json toml_to_json(std::string_view text, std::string_view source) {
  try {
    const toml::table table = toml::parse(text, source);
    return node_to_json(table);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "TOML: " << e.description() << " at line " << e.source().begin.line;
    throw Error(ErrorCode::ParseError, msg.str());
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidConfig, "cannot open config '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  json doc;
  if (path.extension() == ".json") {
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::ParseError, std::string("JSON: ") + e.what());
    }
  } else {
    doc = toml_to_json(text, path.string());
  }
  return config_from_json(doc);
}

json sidecar_json(const ExperimentConfig& config, const ExperimentTable& table) {
  json meta = json::object();
  for (const auto& [key, value] : table.metadata) meta[key] = value;
  json seconds = json::object();
  for (const auto& [key, value] : table.seconds_by_method) seconds[key] = value;
  return json{
      {"schema", std::string(kConfigSchema)},
      {"config", config_to_json(config)},
      {"experiment", table.experiment},
      {"grid_name", table.grid_name},
      {"rows", table.rows.size()},
      {"units", table.units},
      {"failed_units", table.failed_units},
      {"success_fraction", table.success_fraction()},
      {"metadata", meta},
      {"wall_seconds_by_method", seconds},
  };
}

}  // namespace pcs
