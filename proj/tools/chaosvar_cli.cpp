// chaosvar command line: run experiment configs and export plot data.
// Exit codes: 0 all checks pass, 1 some check failed, 2 configuration error.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "chaosvar/error.hpp"
#include "chaosvar/experiment_config.hpp"
#include "chaosvar/experiment_runner.hpp"
#include "chaosvar/experiments.hpp"
#include "chaosvar/plotdata.hpp"

int main(int argc, char** argv) {
  using namespace chaosvar;
  CLI::App app{"chaosvar: spectral predictions and Monte Carlo checks for Gaussian field functionals"};
  app.require_subcommand(1);
  app.fallthrough();

  int threads = 1;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  app.add_option("--threads", threads, "Worker threads for replicates")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "Override the master seed");
  app.add_option("--out", out_dir, "Output directory");

  auto* run = app.add_subcommand("run", "Run an experiment config");
  std::string config_path;
  run->add_option("config", config_path, "Path to the JSON config")->required();

  auto* list = app.add_subcommand("list-experiments", "List experiment ids");

  auto* plot = app.add_subcommand("emit-plotdata", "Write tidy plot series from a records CSV");
  std::string records_path, kind;
  plot->add_option("records", records_path, "Records CSV written by run")->required();
  plot->add_option("kind", kind, "Experiment id to extract")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*list) {
      for (const auto& e : experiment_registry()) std::cout << e.id << "\t" << e.description << "\n";
      return 0;
    }
    if (*run) {
      RunOptions opts;
      opts.threads = threads;
      opts.seed = seed;
      if (!out_dir.empty()) opts.out_dir = out_dir;
      const RunOutput res = run_experiment(load_config(config_path), opts);
      std::size_t failed = 0;
      for (const auto& r : res.records) {
        if (!r.pass) ++failed;
        std::printf("%-4s %-34s x=%-10.4g predicted=%-12.6g simulated=%-12.6g se=%.3g %s\n", r.pass ? "ok" : "FAIL",
                    r.series.c_str(), r.x, r.predicted, r.simulated, r.se, r.message.c_str());
      }
      std::printf("%zu records, %zu failed\nwrote %s\nwrote %s\n", res.records.size(), failed,
                  res.csv_path.string().c_str(), res.json_path.string().c_str());
      return res.all_pass ? 0 : 1;
    }
    if (*plot) {
      const auto recs = load_records(records_path);
      const std::filesystem::path dir =
          out_dir.empty() ? std::filesystem::path(records_path).parent_path() : std::filesystem::path(out_dir);
      const auto path = emit_plotdata(recs, kind, dir.empty() ? "." : dir);
      std::cout << "wrote " << path.string() << "\n";
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
