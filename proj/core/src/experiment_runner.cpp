#include "chaosvar/experiment_runner.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "chaosvar/error.hpp"
#include "chaosvar/experiments.hpp"
#include "chaosvar/grid_dump.hpp"
#include "chaosvar/rng.hpp"

namespace chaosvar {

namespace {

std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  return std::stod(s);
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

const char* kHeader = "experiment,param_index,series,x,check,predicted,tolerance,simulated,se,pass,message";

// Replicates of one point on a pool of workers; slot r always holds replicate r.
std::vector<Observation> run_replicates(const PreparedPoint& p, const std::string& id, std::uint64_t master,
                                        std::size_t point, int threads) {
  std::vector<Observation> obs(p.replicates);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t r = next.fetch_add(1);
      if (r >= p.replicates) return;
      try {
        obs[r] = p.replicate(r, derive_seed(master, id, point, r));
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(p.replicates);
        return;
      }
    }
  };
  const int n = std::max(1, std::min<int>(threads, static_cast<int>(p.replicates)));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  return obs;
}

}  // namespace

std::string check_kind_name(CheckKind k) {
  switch (k) {
    case CheckKind::Abs: return "abs";
    case CheckKind::Le: return "le";
    case CheckKind::Ge: return "ge";
    case CheckKind::Gt: return "gt";
    case CheckKind::Info: return "info";
  }
  return "info";
}

CheckKind check_kind_from_name(const std::string& s) {
  if (s == "abs") return CheckKind::Abs;
  if (s == "le") return CheckKind::Le;
  if (s == "ge") return CheckKind::Ge;
  if (s == "gt") return CheckKind::Gt;
  if (s == "info") return CheckKind::Info;
  throw ConfigError("unknown check kind '" + s + "'");
}

bool evaluate_check(CheckKind k, double predicted, double tolerance, double simulated) {
  switch (k) {
    case CheckKind::Abs: return std::abs(simulated - predicted) <= tolerance;
    case CheckKind::Le: return simulated <= predicted + tolerance;
    case CheckKind::Ge: return simulated >= predicted - tolerance;
    case CheckKind::Gt: return simulated > predicted;
    case CheckKind::Info: return true;
  }
  return false;
}

ResultRecord make_record(std::string series, double x, CheckKind k, double predicted, double tolerance,
                         double simulated, double se, std::string message) {
  ResultRecord r;
  r.series = std::move(series);
  r.x = x;
  r.check = k;
  r.predicted = predicted;
  r.tolerance = tolerance;
  r.simulated = simulated;
  r.se = se;
  r.pass = evaluate_check(k, predicted, tolerance, simulated);
  r.message = std::move(message);
  return r;
}

std::string records_to_csv(const std::vector<ResultRecord>& records) {
  std::string out = kHeader;
  out += '\n';
  for (const auto& r : records) {
    out += csv_quote(r.experiment) + ',' + std::to_string(r.param_index) + ',' + csv_quote(r.series) + ',' +
           fmt_double(r.x) + ',' + check_kind_name(r.check) + ',' + fmt_double(r.predicted) + ',' +
           fmt_double(r.tolerance) + ',' + fmt_double(r.simulated) + ',' + fmt_double(r.se) + ',' +
           (r.pass ? "1" : "0") + ',' + csv_quote(r.message) + '\n';
  }
  return out;
}

std::vector<ResultRecord> records_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kHeader) throw ConfigError("records: unexpected CSV header");
  std::vector<ResultRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = csv_split(line);
    if (f.size() != 11) throw ConfigError("records: malformed row: " + line);
    ResultRecord r;
    try {
      r.experiment = f[0];
      r.param_index = std::stoul(f[1]);
      r.series = f[2];
      r.x = parse_double(f[3]);
      r.check = check_kind_from_name(f[4]);
      r.predicted = parse_double(f[5]);
      r.tolerance = parse_double(f[6]);
      r.simulated = parse_double(f[7]);
      r.se = parse_double(f[8]);
      r.pass = f[9] == "1";
      r.message = f[10];
    } catch (const std::logic_error&) {
      throw ConfigError("records: malformed row: " + line);
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<ResultRecord> load_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("records: cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return records_from_csv(ss.str());
}

nlohmann::json record_to_json(const ResultRecord& r) {
  auto num = [](double v) -> nlohmann::json {
    if (std::isfinite(v)) return v;
    return fmt_double(v);
  };
  return {{"experiment", r.experiment}, {"param_index", r.param_index}, {"series", r.series},
          {"x", num(r.x)},             {"check", check_kind_name(r.check)}, {"predicted", num(r.predicted)},
          {"tolerance", num(r.tolerance)}, {"simulated", num(r.simulated)}, {"se", num(r.se)},
          {"pass", r.pass},            {"wall_time", r.wall_time},     {"message", r.message}};
}

RunOutput run_experiment(const ExperimentConfig& config, const RunOptions& opts) {
  ExperimentConfig cfg = config;
  if (opts.seed) cfg.master_seed = *opts.seed;
  if (opts.out_dir) cfg.output_dir = opts.out_dir->string();
  cfg = resolve_defaults(cfg);

  RunOutput out;
  out.config = cfg;
  const ExperimentInfo& info = find_experiment(cfg.experiment);
  const auto t_start = std::chrono::steady_clock::now();

  ExperimentPlan plan = info.plan(cfg);
  for (std::size_t i = 0; i < plan.points.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<ResultRecord> recs;
    try {
      PreparedPoint p = plan.points[i].prepare();
      std::vector<Observation> obs;
      if (p.replicates > 0) obs = run_replicates(p, cfg.experiment, cfg.master_seed, i, opts.threads);
      recs = p.finish(obs);
    } catch (const std::exception& e) {
      recs.clear();
      ResultRecord r;
      r.series = plan.points[i].label;
      r.check = CheckKind::Abs;
      r.predicted = std::nan("");
      r.simulated = std::nan("");
      r.pass = false;
      r.message = std::string("error: ") + e.what();
      recs.push_back(r);
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (auto& r : recs) {
      r.experiment = cfg.experiment;
      r.param_index = i;
      r.wall_time = dt;
      out.records.push_back(std::move(r));
    }
  }
  if (plan.finalize) {
    std::vector<ResultRecord> extra;
    try {
      extra = plan.finalize(out.records);
    } catch (const std::exception& e) {
      ResultRecord r;
      r.series = "summary";
      r.check = CheckKind::Abs;
      r.predicted = r.simulated = std::nan("");
      r.pass = false;
      r.message = std::string("error: ") + e.what();
      extra.push_back(r);
    }
    for (auto& r : extra) {
      r.experiment = cfg.experiment;
      r.param_index = plan.points.size();
      out.records.push_back(std::move(r));
    }
  }
  for (const auto& r : out.records) out.all_pass = out.all_pass && r.pass;

  if (opts.write_files) {
    const std::filesystem::path dir(cfg.output_dir);
    std::filesystem::create_directories(dir);
    out.csv_path = dir / (cfg.output_stem + ".csv");
    out.json_path = dir / (cfg.output_stem + ".json");
    write_file_atomic(out.csv_path, records_to_csv(out.records));
    nlohmann::json summary;
    summary["config"] = config_to_json(cfg);
    summary["all_pass"] = out.all_pass;
    summary["wall_time"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    summary["threads"] = opts.threads;
    summary["records"] = nlohmann::json::array();
    for (const auto& r : out.records) summary["records"].push_back(record_to_json(r));
    write_file_atomic(out.json_path, summary.dump(2) + "\n");
  }
  return out;
}

}  // namespace chaosvar
