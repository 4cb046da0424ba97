#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace chaosvar {

inline constexpr int kSchemaVersion = 1;

// Declarative experiment description. Objects `resolution`, `tolerances` and
// `params` are merged over per-experiment defaults by resolve_defaults.
struct ExperimentConfig {
  int schema_version = kSchemaVersion;
  std::string experiment;
  int d = 0;  // 0 selects the experiment default
  int k = 1;
  nlohmann::json measure;  // null selects the experiment default
  std::string hypothesis = "H1";
  std::vector<double> lambdas;
  std::size_t replicates = 0;  // 0 selects the experiment default
  std::uint64_t master_seed = 1;
  nlohmann::json resolution = nlohmann::json::object();
  nlohmann::json tolerances = nlohmann::json::object();
  nlohmann::json params = nlohmann::json::object();
  std::string output_dir = "results";
  std::string output_stem;  // empty selects the experiment id
};

nlohmann::json config_to_json(const ExperimentConfig& c);
// Throws ConfigError on malformed input or unknown keys.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

// Fill defaults, then validate: known id, replicates >= 2, lambdas strictly increasing.
ExperimentConfig resolve_defaults(const ExperimentConfig& c);
void validate(const ExperimentConfig& c);

}  // namespace chaosvar
