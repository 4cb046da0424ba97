#include "chaosvar/grid_dump.hpp"

#include <fstream>
#include <vector>

#include "chaosvar/error.hpp"

namespace chaosvar {

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_grid_dump(const std::filesystem::path& base, const Eigen::MatrixXd& values,
                     const GridSpec& grid, std::uint64_t seed, const std::string& measure_id) {
  if (values.rows() != grid.ny || values.cols() != grid.nx)
    throw std::invalid_argument("write_grid_dump: values do not match the grid spec");
  std::vector<double> flat(static_cast<std::size_t>(values.size()));
  for (Eigen::Index r = 0; r < values.rows(); ++r)
    for (Eigen::Index c = 0; c < values.cols(); ++c)
      flat[static_cast<std::size_t>(r * values.cols() + c)] = values(r, c);
  std::filesystem::path bin = base, meta = base;
  bin += ".bin";
  meta += ".json";
  write_file_atomic(bin, std::string(reinterpret_cast<const char*>(flat.data()), flat.size() * sizeof(double)));
  nlohmann::json j = {
      {"grid", {{"x0", grid.x0}, {"y0", grid.y0}, {"h", grid.h}, {"nx", grid.nx}, {"ny", grid.ny}}},
      {"seed", seed},
      {"measure_id", measure_id},
      {"dtype", "float64"},
      {"order", "row-major"},
      {"data", bin.filename().string()}};
  write_file_atomic(meta, j.dump(2) + "\n");
}

}  // namespace chaosvar
