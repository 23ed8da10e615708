#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "kex/simulator.hpp"

namespace kex {

// A full experiment description: simulation inputs plus output preferences.
struct ExperimentConfig {
    ExperimentParams params;
    std::string output_dir = "out";
    bool write_csv = true;
    bool write_json = true;
};

// Parses and validates a JSON experiment configuration. Unknown keys are
// rejected; every validation failure is reported with its field path, all
// collected into one ConfigError. Blood-group distributions may be given
// inline or as a named fixture file resolved relative to the config.
ExperimentConfig parse_config(const std::string& path);

// Same, from an already-parsed document. `base_dir` anchors fixture lookup.
ExperimentConfig parse_config_json(const nlohmann::json& doc, const std::string& base_dir);

// Serializes a config back to JSON; parse_config_json(config_to_json(c))
// yields an equivalent config (fixture references come back inline).
nlohmann::json config_to_json(const ExperimentConfig& config);

} // namespace kex
