#include <memory>
#include <vector>

#include <benchmark/benchmark.h>

#include "chaosvar/convolution.hpp"
#include "chaosvar/field.hpp"
#include "chaosvar/gauss_hermite.hpp"
#include "chaosvar/nodal.hpp"
#include "chaosvar/spectral_measure.hpp"

using namespace chaosvar;

namespace {

std::shared_ptr<const FieldModel> wave_model(int atoms) {
  DiscretizationSpec spec;
  spec.strategy = DiscretizationSpec::Strategy::SphereEquiangular;
  spec.n_atoms = atoms;
  return std::make_shared<const FieldModel>(discretize(random_wave(2), spec), "bench");
}

void BM_GridEvaluate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto model = wave_model(128);
  const GridPhases2D grid(*model, -10.0, -10.0, 20.0 / n, n, n);
  std::uint64_t seed = 1;
  for (auto _ : state) {
    const FieldRealization real(model, seed++);
    benchmark::DoNotOptimize(grid.evaluate(real));
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_GridEvaluate)->Arg(128)->Arg(512);

void BM_MarchingSquares(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto model = wave_model(128);
  const double h = 20.0 / n;
  const GridPhases2D grid(*model, -10.0, -10.0, h, n, n);
  const Eigen::MatrixXd values = grid.evaluate(FieldRealization(model, 3));
  NodalLengthOptions opt;
  opt.x0 = opt.y0 = -10.0;
  for (auto _ : state) benchmark::DoNotOptimize(nodal_length_2d(values, h, opt));
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_MarchingSquares)->Arg(128)->Arg(512);

void BM_HermiteForm(benchmark::State& state) {
  const int q = static_cast<int>(state.range(0));
  const std::vector<double> x{0.3, -1.1, 0.7, 1.9};
  for (auto _ : state) benchmark::DoNotOptimize(hermite_form(x, q));
}
BENCHMARK(BM_HermiteForm)->DenseRange(2, 6, 2);

void BM_ConvolveAtomic(benchmark::State& state) {
  DiscretizationSpec spec;
  spec.strategy = DiscretizationSpec::Strategy::SphereEquiangular;
  spec.n_atoms = static_cast<int>(state.range(0));
  const AtomicMeasure mu = discretize(random_wave(2), spec);
  for (auto _ : state) benchmark::DoNotOptimize(convolve_atomic(mu, mu));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}
BENCHMARK(BM_ConvolveAtomic)->Arg(64)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
