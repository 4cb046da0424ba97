#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "chaosvar/error.hpp"
#include "chaosvar/field.hpp"
#include "chaosvar/measure_estimates.hpp"
#include "chaosvar/nodal.hpp"
#include "chaosvar/rng.hpp"
#include "chaosvar/spectral_measure.hpp"
#include "chaosvar/stats.hpp"

using namespace chaosvar;
using std::numbers::pi;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd x(v.size());
  int i = 0;
  for (double t : v) x[i++] = t;
  return x;
}

// Every realization is a shifted cosine with frequency xi0.
AtomicMeasure cosine_pair(const Eigen::VectorXd& xi0) {
  AtomicMeasure mu;
  mu.dim_freq = static_cast<int>(xi0.size());
  mu.atoms.push_back({xi0, HermitianForm::scalar(0.5)});
  mu.atoms.push_back({-xi0, HermitianForm::scalar(0.5)});
  return mu;
}

AtomicMeasure gaussian_process_atoms(int per_axis) {
  DiscretizationSpec spec;
  spec.strategy = DiscretizationSpec::Strategy::GridQuadrature;
  return discretize(SpectralMeasure(gaussian_covariance_density(1, 1.0, per_axis)), spec);
}

AtomicMeasure wave_atoms(int n) {
  DiscretizationSpec spec;
  spec.strategy = DiscretizationSpec::Strategy::SphereEquiangular;
  spec.n_atoms = n;
  return discretize(SpectralMeasure(random_wave(2)), spec);
}

double gaussian_delta(double y, double eps) {
  return std::exp(-0.5 * y * y / (eps * eps)) / (eps * std::sqrt(2 * pi));
}

}  // namespace

TEST_SUITE("nodal") {
  TEST_CASE("constant integrand gives the scaled integral of the test function") {
    const auto mu = gaussian_process_atoms(64);
    const auto real = sample_field(mu, 1);
    const auto one = [](const JetView&) { return 1.0; };
    const double lambda = 10.0;
    const TestFunction ball(TestFunction::Kind::Ball, 1);
    const auto r = smoothed_functional(real, one, ball, lambda, 0.01);
    CHECK(r.value == doctest::Approx(std::sqrt(2 * lambda)).epsilon(1e-6));
    const TestFunction gauss(TestFunction::Kind::Gaussian, 1);
    CHECK(smoothed_functional(real, one, gauss, lambda, 0.01).value ==
          doctest::Approx(std::sqrt(lambda) * gauss.integral()).epsilon(1e-6));
  }

  TEST_CASE("unresolved grids are rejected") {
    const auto real = sample_field(cosine_pair(vec({2.0})), 1);
    CHECK_THROWS_AS(count_zeros_1d(real, 0.0, 10.0, 0.1, 0.0), NumericalError);
  }

  TEST_CASE("cosine zeros") {
    const double xi0 = 0.37;
    const auto real = sample_field(cosine_pair(vec({xi0})), 5);
    const double len = 100.0;
    const auto z = count_zeros_1d(real, 0.0, len, 0.05, 0.0);
    CHECK(std::abs(static_cast<double>(z.count) - 2 * xi0 * len) <= 1.0);
    for (double t : z.roots) CHECK(std::abs(real.value(vec({t}))[0]) < 1e-8);
  }

  TEST_CASE("windowed zeros of a cosine") {
    // zeros of cos(pi v) at k + 1/2: 2 xi0 * 2 lambda of them in [-lambda, lambda]
    const auto mu = cosine_pair(vec({0.5}));
    const double lambda = 10.0;
    const TestFunction ball(TestFunction::Kind::Ball, 1);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const auto real = sample_field(mu, seed);
      // every realization is a shifted cosine; only a shift that puts a zero on the
      // window boundary changes the count, which has probability zero
      const auto w = windowed_nodal_functional(real, ball, lambda, Observable::Zeros1D, 0.0, 0.05);
      CHECK(std::abs(w.value * std::sqrt(2 * lambda) - 2 * 0.5 * 2 * lambda) <= 1.0);
    }
  }

  TEST_CASE("Kac-Rice zero rates") {
    const auto model = std::make_shared<const FieldModel>(gaussian_process_atoms(256));
    const GridPhases1D grid(*model, 0.0, 0.05, 601);  // [0, 30]
    for (double u : {0.0, 1.0}) {
      const int n = 2000;
      std::vector<double> rate(n);
      for (int i = 0; i < n; ++i)
        rate[i] = count_zeros_1d(FieldRealization(model, derive_seed(7, "rice", 0, i)), grid, u).count / 30.0;
      const auto s = summarize(rate);
      CHECK(std::abs(s.mean - std::exp(-u * u / 2) / pi) < 3.5 * s.se_mean);
    }
  }

  TEST_CASE("parallel lines") {
    const double xi0 = 0.2, h = 0.05;
    const int nx = 201, ny = 101;
    Eigen::MatrixXd v(ny, nx);
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) v(j, i) = std::cos(2 * pi * xi0 * (i * h) + 0.3);
    const auto r = nodal_length_2d(v, h);
    // lines x = const crossing the full height, spacing 1 / (2 xi0)
    const double width = (nx - 1) * h, height = (ny - 1) * h;
    int lines = 0;
    for (int k = -10; k < 100; ++k) {
      const double x = ((k + 0.5) * pi - 0.3) / (2 * pi * xi0);
      if (x > 0 && x < width) ++lines;
    }
    CHECK(r.length == doctest::Approx(lines * height).epsilon(1e-9));
    CHECK(r.length / (width * height) == doctest::Approx(2 * xi0).epsilon(0.1));
  }

  TEST_CASE("nodal length is stable under refinement") {
    const auto mu = wave_atoms(256);
    const FieldModel model(mu);
    const auto real = sample_field(mu, 11);
    const double side = 20.0;
    double prev = 0.0;
    for (double h : {0.1, 0.05}) {
      const int n = static_cast<int>(std::lround(side / h)) + 1;
      const GridPhases2D g(model, 0.0, 0.0, h, n, n);
      NodalLengthOptions opt;
      opt.center_value = [&](double x, double y) { return real.value(vec({x, y}))[0]; };
      const double len = nodal_length_2d(g.evaluate(real), h, opt).length;
      if (prev > 0) CHECK(std::abs(len - prev) / prev < 0.005);
      prev = len;
    }
  }

  TEST_CASE("mean nodal length of the random wave") {
    const auto mu = wave_atoms(512);
    const auto model = std::make_shared<const FieldModel>(mu);
    const double side = 10.0, h = 0.2;
    const int n = 51;
    const GridPhases2D g(*model, 0.0, 0.0, h, n, n);
    std::vector<double> dens(300);
    for (std::size_t i = 0; i < dens.size(); ++i) {
      const FieldRealization r(model, derive_seed(8, "length", 0, i));
      NodalLengthOptions opt;
      opt.center_value = [&](double x, double y) { return r.value(vec({x, y}))[0]; };
      dens[i] = nodal_length_2d(g.evaluate(r), h, opt).length / (side * side);
    }
    const auto s = summarize(dens);
    // Kac-Rice: (2 pi)^{-1/2} E|grad Y| = (2 pi)^{-1/2} sqrt(pi / 2) = 1/2
    CHECK(std::abs(s.mean - 0.5) < 3.5 * s.se_mean + 0.005);
  }

  TEST_CASE("critical points of a product of cosines") {
    // F = cos(2 pi xi0 x) cos(2 pi xi0 y): maxima, minima and saddles form a
    // lattice with 8 xi0^2 points per unit area
    AtomicMeasure mu;
    mu.dim_freq = 2;
    const double xi0 = 0.25;
    for (double sx : {-1.0, 1.0})
      for (double sy : {-1.0, 1.0}) mu.atoms.push_back({vec({sx * xi0, sy * xi0}), HermitianForm::scalar(0.25)});
    // a realization is A cos(2 pi xi0 (x + y) + a) + B cos(2 pi xi0 (x - y) + b),
    // whose critical points form a lattice of the same density as the product
    const auto real = sample_field(mu, 3);
    const Window2D w{0.1, 20.1, 0.3, 20.3};
    const auto cp = critical_points_count(real, w, 0.05);
    for (const auto& p : cp.points) CHECK(real.gradient(p).norm() < 1e-9);
    CHECK(std::abs(static_cast<double>(cp.count()) - 8 * xi0 * xi0 * 400.0) <= 0.1 * 8 * xi0 * xi0 * 400.0);
  }

  TEST_CASE("one-dimensional critical points are zeros of the derivative") {
    const auto real = sample_field(gaussian_process_atoms(128), 4);
    const Window2D w{-15.0, 15.0, 0.0, 0.0};
    const auto cp = critical_points_count(real, w, 0.05);
    const auto z = count_zeros_1d(real, -15.0, 15.0, 0.05, 0.0, 0, 1);
    CHECK(cp.count() == z.count);
  }

  TEST_CASE("critical point counts scale with the window area") {
    const auto model = std::make_shared<const FieldModel>(wave_atoms(128));
    std::vector<double> small(200), large(200);
    for (std::size_t i = 0; i < small.size(); ++i) {
      const FieldRealization r(model, derive_seed(9, "crit", 0, i));
      small[i] = critical_points_count(r, {0, 6, 0, 6}, 0.1).count() / 36.0;
      large[i] = critical_points_count(r, {20, 32, 20, 32}, 0.1).count() / 144.0;
    }
    const auto a = summarize(small), b = summarize(large);
    CHECK(std::abs(a.mean - b.mean) < 3 * std::hypot(a.se_mean, b.se_mean));
  }

  TEST_CASE("smoothed delta functionals converge to the zero count") {
    // A single cosine has only transversal zeros. Random fields can have near
    // tangencies (|X| ~ 1e-3 at a local extremum) that delta_eps sees until eps is below that.
    const double xi0 = 0.37;
    const auto real = sample_field(cosine_pair(vec({xi0})), 12);
    const double amp = std::hypot(real.value(vec({0.0}))[0], real.gradient(vec({0.0}))(0, 0) / (2 * pi * xi0));
    REQUIRE(amp > 0.3);
    const TestFunction phi(TestFunction::Kind::Gaussian, 1);
    const double lambda = 20.0;
    const double direct = windowed_nodal_functional(real, phi, lambda, Observable::Zeros1D, 0.0, 0.02).value;
    std::vector<double> errs;
    for (double e : {0.1 * amp, 0.05 * amp, 0.025 * amp}) {
      const auto f = [e](const JetView& j) { return gaussian_delta(j.value[0], e) * std::abs(j.gradient[0]); };
      errs.push_back(std::abs(smoothed_functional(real, f, phi, lambda, 0.001, 1).value - direct));
    }
    CHECK(errs[0] < 0.01 * direct);
    CHECK(errs[2] < 1e-3 * direct);
    CHECK(errs[2] <= errs[0]);
  }

  TEST_CASE("no first chaos at the zero level") {
    const auto model = std::make_shared<const FieldModel>(gaussian_process_atoms(256));
    const TestFunction ball(TestFunction::Kind::Ball, 1);
    const double lambda = 10.0;
    const NodalWindow win(*model, ball, lambda, Observable::Zeros1D, 0.05);
    const WindowQuadrature lin(*model, ball, lambda, 0.05);
    const auto ident = [](const JetView& j) { return j.value[0]; };
    const int n = 3000;
    std::vector<double> z(n), w(n);
    for (int i = 0; i < n; ++i) {
      const FieldRealization r(model, derive_seed(10, "sym", 0, i));
      z[i] = win.evaluate(r, 0.0).value;
      w[i] = lin.apply(r, ident).value;
    }
    std::vector<double> prod(n);
    const auto sz = summarize(z), sw = summarize(w);
    for (int i = 0; i < n; ++i) prod[i] = (z[i] - sz.mean) * (w[i] - sw.mean);
    const auto sp = summarize(prod);
    CHECK(std::abs(sp.mean) < 3 * sp.se_mean);
  }

  TEST_CASE("observable names") {
    for (auto o : {Observable::Zeros1D, Observable::Length2D, Observable::CriticalPoints})
      CHECK(observable_from_name(observable_name(o)) == o);
    CHECK_THROWS(observable_from_name("area"));
  }
}
