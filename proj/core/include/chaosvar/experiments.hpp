#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "chaosvar/experiment_config.hpp"
#include "chaosvar/experiment_runner.hpp"

namespace chaosvar {

using Observation = std::vector<double>;

// One parameter point after its (possibly expensive) set-up.
struct PreparedPoint {
  std::size_t replicates = 0;  // 0 for prediction-only points
  std::function<Observation(std::size_t rep, std::uint64_t seed)> replicate;
  std::function<std::vector<ResultRecord>(const std::vector<Observation>& obs)> finish;
};

struct PointTask {
  std::string label;
  std::function<PreparedPoint()> prepare;
};

struct ExperimentPlan {
  std::vector<PointTask> points;
  // Records derived from all points together (e.g. scaling across lambdas).
  std::function<std::vector<ResultRecord>(const std::vector<ResultRecord>&)> finalize;
};

struct ExperimentInfo {
  std::string id;
  std::string description;
  int default_dim = 1;
  std::function<nlohmann::json(int d)> defaults;
  std::function<ExperimentPlan(const ExperimentConfig&)> plan;
};

const std::vector<ExperimentInfo>& experiment_registry();
const ExperimentInfo& find_experiment(const std::string& id);  // ConfigError if unknown

}  // namespace chaosvar
