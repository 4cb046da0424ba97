#include "chaosvar/experiment_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "chaosvar/error.hpp"
#include "chaosvar/experiments.hpp"

namespace chaosvar {

namespace {

const std::set<std::string> kKeys = {"schema_version", "experiment", "d",          "k",
                                     "measure",        "hypothesis", "lambdas",    "replicates",
                                     "master_seed",    "resolution", "tolerances", "params",
                                     "output_dir",     "output_stem"};

nlohmann::json merged(nlohmann::json base, const nlohmann::json& over) {
  if (!base.is_object()) base = nlohmann::json::object();
  for (auto it = over.begin(); it != over.end(); ++it) base[it.key()] = it.value();
  return base;
}

}  // namespace

nlohmann::json config_to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["schema_version"] = c.schema_version;
  j["experiment"] = c.experiment;
  j["d"] = c.d;
  j["k"] = c.k;
  j["measure"] = c.measure;
  j["hypothesis"] = c.hypothesis;
  j["lambdas"] = c.lambdas;
  j["replicates"] = c.replicates;
  j["master_seed"] = c.master_seed;
  j["resolution"] = c.resolution;
  j["tolerances"] = c.tolerances;
  j["params"] = c.params;
  j["output_dir"] = c.output_dir;
  j["output_stem"] = c.output_stem;
  return j;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!kKeys.count(it.key())) throw ConfigError("config: unknown key '" + it.key() + "'");
  try {
    ExperimentConfig c;
    c.schema_version = j.value("schema_version", 0);
    if (c.schema_version != kSchemaVersion)
      throw ConfigError("config: unsupported schema_version " + std::to_string(c.schema_version));
    c.experiment = j.at("experiment").get<std::string>();
    c.d = j.value("d", 0);
    c.k = j.value("k", 1);
    c.measure = j.value("measure", nlohmann::json());
    c.hypothesis = j.value("hypothesis", std::string("H1"));
    c.lambdas = j.value("lambdas", std::vector<double>{});
    c.replicates = j.value("replicates", std::size_t{0});
    c.master_seed = j.value("master_seed", std::uint64_t{1});
    c.resolution = j.value("resolution", nlohmann::json::object());
    c.tolerances = j.value("tolerances", nlohmann::json::object());
    c.params = j.value("params", nlohmann::json::object());
    c.output_dir = j.value("output_dir", std::string("results"));
    c.output_stem = j.value("output_stem", std::string());
    if (!c.resolution.is_object() || !c.tolerances.is_object() || !c.params.is_object())
      throw ConfigError("config: resolution, tolerances and params must be objects");
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ss.str());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config: " + path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

ExperimentConfig resolve_defaults(const ExperimentConfig& c) {
  const ExperimentInfo& info = find_experiment(c.experiment);
  ExperimentConfig r = c;
  if (r.d == 0) r.d = info.default_dim;
  const nlohmann::json def = info.defaults(r.d);
  if (r.measure.is_null() && def.contains("measure")) r.measure = def["measure"];
  if (r.lambdas.empty()) r.lambdas = def.value("lambdas", std::vector<double>{});
  if (r.replicates == 0) r.replicates = def.value("replicates", std::size_t{2});
  r.resolution = merged(def.value("resolution", nlohmann::json::object()), c.resolution);
  r.tolerances = merged(def.value("tolerances", nlohmann::json::object()), c.tolerances);
  r.params = merged(def.value("params", nlohmann::json::object()), c.params);
  if (r.output_stem.empty()) r.output_stem = r.experiment;
  validate(r);
  return r;
}

void validate(const ExperimentConfig& c) {
  find_experiment(c.experiment);
  if (c.replicates < 2) throw ConfigError("config: replicates must be >= 2");
  for (std::size_t i = 1; i < c.lambdas.size(); ++i)
    if (!(c.lambdas[i] > c.lambdas[i - 1])) throw ConfigError("config: lambdas must be strictly increasing");
  for (double l : c.lambdas)
    if (!(l > 0.0)) throw ConfigError("config: lambdas must be positive");
  if (c.d < 1 || c.d > 3) throw ConfigError("config: d must be 1, 2 or 3");
  if (c.k < 1 || c.k > c.d) throw ConfigError("config: need 1 <= k <= d");
  if (c.hypothesis != "H1" && c.hypothesis != "H2" && c.hypothesis != "H3")
    throw ConfigError("config: hypothesis must be H1, H2 or H3");
}

}  // namespace chaosvar
