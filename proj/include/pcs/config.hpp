#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "pcs/experiments.hpp"

namespace pcs {

inline constexpr std::string_view kConfigSchema = "pcs-experiment/1";

/// Keys: schema, experiment, name, trials, seed, threads, methods, grid,
/// relative_grid, delta, design, [synth] and [two_stage] sections.
/// Unknown keys are rejected. Throws InvalidConfig.
ExperimentConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const ExperimentConfig& config);

/// TOML text to the same JSON tree config_from_json consumes.
nlohmann::json toml_to_json(std::string_view text, std::string_view source = "config");

/// `.json` files are parsed as JSON, everything else as TOML.
ExperimentConfig load_config(const std::filesystem::path& path);

/// Provenance sidecar: the config echo plus table metadata and wall clock.
nlohmann::json sidecar_json(const ExperimentConfig& config, const ExperimentTable& table);

}  // namespace pcs
