#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "chaosvar/experiment_runner.hpp"

namespace chaosvar {

// Tidy series "x,y,yerr,series" for the records of experiment `kind`: one row
// for the simulated value (yerr = se) and one for the prediction (yerr = tolerance).
// Throws ConfigError when no record matches.
std::string plotdata_csv(const std::vector<ResultRecord>& records, const std::string& kind);

// Writes <out_dir>/<kind>_plot.csv and returns its path.
std::filesystem::path emit_plotdata(const std::vector<ResultRecord>& records, const std::string& kind,
                                    const std::filesystem::path& out_dir);

}  // namespace chaosvar
