#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "chaosvar/experiment_config.hpp"

namespace chaosvar {

// How `pass` follows from predicted, tolerance and simulated:
//   Abs: |simulated - predicted| <= tolerance
//   Le:  simulated <= predicted + tolerance
//   Ge:  simulated >= predicted - tolerance
//   Gt:  simulated > predicted
//   Info: always passes (reported quantity only)
enum class CheckKind { Abs, Le, Ge, Gt, Info };
std::string check_kind_name(CheckKind k);
CheckKind check_kind_from_name(const std::string& s);

struct ResultRecord {
  std::string experiment;
  std::size_t param_index = 0;
  std::string series;
  double x = 0.0;  // parameter value (lambda, log lambda, radius, ...)
  CheckKind check = CheckKind::Info;
  double predicted = 0.0;
  double tolerance = 0.0;
  double simulated = 0.0;
  double se = 0.0;
  bool pass = true;
  double wall_time = 0.0;  // seconds; kept out of the CSV so reruns compare byte for byte
  std::string message;
};

bool evaluate_check(CheckKind k, double predicted, double tolerance, double simulated);
ResultRecord make_record(std::string series, double x, CheckKind k, double predicted, double tolerance,
                         double simulated, double se, std::string message = {});

std::string records_to_csv(const std::vector<ResultRecord>& records);
std::vector<ResultRecord> records_from_csv(const std::string& text);
std::vector<ResultRecord> load_records(const std::filesystem::path& path);
nlohmann::json record_to_json(const ResultRecord& r);

struct RunOptions {
  int threads = 1;
  std::optional<std::uint64_t> seed;           // overrides master_seed
  std::optional<std::filesystem::path> out_dir;  // overrides output_dir
  bool write_files = true;
};

struct RunOutput {
  ExperimentConfig config;  // resolved
  std::vector<ResultRecord> records;
  bool all_pass = true;
  std::filesystem::path csv_path, json_path;
};

// Resolve defaults, run every parameter point (replicates on a pool of
// `threads` workers, results reduced in replicate order), then write
// <stem>.csv and <stem>.json atomically. A failing point yields a failure row
// and the sweep continues. Throws ConfigError for invalid configs.
RunOutput run_experiment(const ExperimentConfig& config, const RunOptions& opts = {});

}  // namespace chaosvar
