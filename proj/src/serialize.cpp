#include "pcs/serialize.hpp"

#include <string>
#include <vector>

#include "pcs/error.hpp"

namespace pcs {

namespace {

using nlohmann::json;

void expect_schema(const json& doc, std::string_view schema) {
  if (!doc.is_object() || !doc.contains("schema") || doc["schema"] != std::string(schema)) {
    throw Error(ErrorCode::ParseError, "expected schema '" + std::string(schema) + "'");
  }
}

json vector_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Vector vector_from(const json& j, Index expected, const char* what) {
  const auto values = j.get<std::vector<double>>();
  if (static_cast<Index>(values.size()) != expected) {
    throw Error(ErrorCode::ParseError, std::string(what) + " has the wrong length");
  }
  return Eigen::Map<const Vector>(values.data(), expected);
}

}  // namespace

json model_to_json(const PredictorModel& model) {
  json rows = json::array();
  for (Index i = 0; i < model.coefficients.rows(); ++i) rows.push_back(vector_json(model.coefficients.row(i)));
  return json{
      {"schema", std::string(kModelSchema)},
      {"variables", model.variables},
      {"support", model.support},
      {"responses", model.y_mean.size()},
      {"coefficients", rows},
      {"x_mean", vector_json(model.x_mean)},
      {"x_scale", vector_json(model.x_scale)},
      {"y_mean", vector_json(model.y_mean)},
      {"ridge_fallback", model.ridge_fallback},
  };
}

PredictorModel model_from_json(const json& doc) {
  expect_schema(doc, kModelSchema);
  try {
    PredictorModel m;
    m.variables = doc.at("variables").get<Index>();
    m.support = doc.at("support").get<IndexSet>();
    const Index k = static_cast<Index>(m.support.size());
    const Index q = doc.at("responses").get<Index>();
    for (std::size_t i = 0; i < m.support.size(); ++i) {
      if (m.support[i] < 0 || m.support[i] >= m.variables || (i > 0 && m.support[i] <= m.support[i - 1])) {
        throw Error(ErrorCode::ParseError, "support must be ascending indices below 'variables'");
      }
    }
    const auto& rows = doc.at("coefficients");
    if (static_cast<Index>(rows.size()) != k) throw Error(ErrorCode::ParseError, "coefficients need one row per support index");
    m.coefficients.resize(k, q);
    for (Index i = 0; i < k; ++i) m.coefficients.row(i) = vector_from(rows[static_cast<std::size_t>(i)], q, "coefficient row").transpose();
    m.x_mean = vector_from(doc.at("x_mean"), k, "x_mean");
    m.x_scale = vector_from(doc.at("x_scale"), k, "x_scale");
    m.y_mean = vector_from(doc.at("y_mean"), q, "y_mean");
    m.ridge_fallback = doc.value("ridge_fallback", false);
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("model: ") + e.what());
  }
}

json synth_to_json(const SynthSpec& s) {
  return json{
      {"schema", std::string(kSynthSchema)},
      {"p", s.p},
      {"q", s.q},
      {"n", s.n},
      {"activation_prob", s.activation_prob},
      {"noise_var", s.noise_var},
      {"k", s.k},
      {"sigma_bg", s.sigma_bg},
      {"block_corr", s.block_corr},
      {"seed", s.seed},
  };
}

SynthSpec synth_from_json(const json& doc) {
  expect_schema(doc, kSynthSchema);
  try {
    SynthSpec s;
    s.p = doc.value("p", s.p);
    s.q = doc.value("q", s.q);
    s.n = doc.value("n", s.n);
    s.activation_prob = doc.value("activation_prob", s.activation_prob);
    s.noise_var = doc.value("noise_var", s.noise_var);
    s.k = doc.value("k", s.k);
    s.sigma_bg = doc.value("sigma_bg", s.sigma_bg);
    s.block_corr = doc.value("block_corr", s.block_corr);
    s.seed = doc.value("seed", s.seed);
    validate(s);
    return s;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("synth: ") + e.what());
  }
}

}  // namespace pcs
