#pragma once

#include <string_view>

#include <json.hpp>

#include "pcs/predict.hpp"
#include "pcs/synth.hpp"

namespace pcs {

inline constexpr std::string_view kModelSchema = "pcs-model/1";
inline constexpr std::string_view kSynthSchema = "pcs-synth/1";

nlohmann::json model_to_json(const PredictorModel& model);
/// Throws ParseError on a wrong schema or inconsistent shapes.
PredictorModel model_from_json(const nlohmann::json& doc);

nlohmann::json synth_to_json(const SynthSpec& spec);
SynthSpec synth_from_json(const nlohmann::json& doc);

}  // namespace pcs
