#include "chaosvar/plotdata.hpp"

#include <cmath>
#include <cstdio>

#include "chaosvar/error.hpp"
#include "chaosvar/grid_dump.hpp"

namespace chaosvar {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string plotdata_csv(const std::vector<ResultRecord>& records, const std::string& kind) {
  std::string out = "x,y,yerr,series\n";
  std::size_t rows = 0;
  for (const auto& r : records) {
    if (r.experiment != kind) continue;
    if (std::isfinite(r.simulated)) {
      out += num(r.x) + ',' + num(r.simulated) + ',' + num(r.se) + ',' + r.series + "/simulated\n";
      ++rows;
    }
    if (r.check != CheckKind::Info && std::isfinite(r.predicted)) {
      out += num(r.x) + ',' + num(r.predicted) + ',' + num(r.tolerance) + ',' + r.series + "/predicted\n";
      ++rows;
    }
  }
  if (rows == 0) throw ConfigError("emit-plotdata: no records for '" + kind + "'");
  return out;
}

std::filesystem::path emit_plotdata(const std::vector<ResultRecord>& records, const std::string& kind,
                                    const std::filesystem::path& out_dir) {
  const std::string text = plotdata_csv(records, kind);
  std::filesystem::create_directories(out_dir);
  const auto path = out_dir / (kind + "_plot.csv");
  write_file_atomic(path, text);
  return path;
}

}  // namespace chaosvar
