#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <Eigen/Dense>
#include <json.hpp>

namespace chaosvar {

struct GridSpec {
  double x0 = 0.0, y0 = 0.0, h = 1.0;
  int nx = 0, ny = 1;
};

// Writes <base>.bin (row-major float64, ny rows of nx values, native endianness)
// and <base>.json {grid, seed, measure_id, dtype, order}. Both atomically.
void write_grid_dump(const std::filesystem::path& base, const Eigen::MatrixXd& values,
                     const GridSpec& grid, std::uint64_t seed, const std::string& measure_id);

// Writes text to path through a temporary file and rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace chaosvar
