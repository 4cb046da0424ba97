#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/special_functions/bessel.hpp>
#include <Eigen/Dense>

#include "chaosvar/chaos_coeffs.hpp"
#include "chaosvar/field.hpp"
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

AtomicMeasure wave_atoms(int d, int n) {
  DiscretizationSpec spec;
  spec.strategy = DiscretizationSpec::Strategy::SphereEquiangular;
  spec.n_atoms = n;
  return discretize(SpectralMeasure(random_wave(d)), spec);
}

AtomicMeasure sinc_atoms(int n) {
  const auto dens = lebesgue_from_function(Lattice::symmetric_box(1, 1.0 / (2 * pi), 64), 1,
                                           [](const Eigen::VectorXd&) { return HermitianForm::scalar(pi); });
  DiscretizationSpec spec;
  spec.strategy = DiscretizationSpec::Strategy::GridQuadrature;
  spec.n_atoms = n;
  return discretize(SpectralMeasure(dens), spec);
}

}  // namespace

TEST_SUITE("field") {
  TEST_CASE("discretizations are symmetric and preserve mass") {
    const auto native = wave_atoms(2, 16);
    DiscretizationSpec keep;
    const auto same = discretize(SpectralMeasure(native), keep);
    CHECK(same.atoms.size() == native.atoms.size());
    for (std::size_t i = 0; i < same.atoms.size(); ++i) CHECK(same.atoms[i].freq == native.atoms[i].freq);

    for (const auto& mu : {wave_atoms(2, 512), wave_atoms(3, 1024), sinc_atoms(512)}) {
      const SpectralMeasure m = mu;
      CHECK(is_symmetric(m));
      CHECK(total_mass(m)(0, 0).real() == doctest::Approx(1.0).epsilon(1e-8));
    }
  }

  TEST_CASE("discretized covariances match closed forms") {
    const SpectralMeasure circle = wave_atoms(2, 256);
    for (double r = 0.0; r <= 10.0; r += 0.5) {
      const double j0 = boost::math::cyl_bessel_j(0, std::sqrt(2.0) * r);
      CHECK(std::abs(covariance_eval(circle, vec({r * 0.6, r * 0.8}))(0, 0).real() - j0) < 1e-3);
    }
    const SpectralMeasure sinc = sinc_atoms(512);
    CHECK(std::abs(covariance_eval(sinc, vec({pi}))(0, 0).real()) < 1e-3);
    CHECK(covariance_eval(sinc, vec({1.0}))(0, 0).real() == doctest::Approx(std::sin(1.0)).epsilon(1e-3));
  }

  TEST_CASE("a single cosine pair has constant amplitude") {
    AtomicMeasure mu;
    mu.atoms.push_back({vec({0.3}), HermitianForm::scalar(0.5)});
    mu.atoms.push_back({vec({-0.3}), HermitianForm::scalar(0.5)});
    const auto real = sample_field(mu, 17);
    const double a = real.value(vec({0.0}))[0];
    const double b = real.gradient(vec({0.0}))(0, 0) / (2 * pi * 0.3);
    for (double v : {0.4, 1.7, -3.3}) {
      const double expect = a * std::cos(2 * pi * 0.3 * v) + b * std::sin(2 * pi * 0.3 * v);
      CHECK(real.value(vec({v}))[0] == doctest::Approx(expect).epsilon(1e-12).scale(1.0));
    }
  }

  TEST_CASE("one-point law is exactly Gaussian with the total mass as variance") {
    const auto mu = wave_atoms(2, 16);
    const auto model = std::make_shared<const FieldModel>(mu);
    const int n = 100000;
    std::vector<double> y(n);
    for (int i = 0; i < n; ++i) y[i] = FieldRealization(model, derive_seed(1, "gauss", 0, i)).value(vec({0.3, 0.2}))[0];
    const auto s = summarize(y);
    CHECK(std::abs(s.variance - 1.0) < 3 * s.se_variance);
    double m3 = 0.0, m4 = 0.0;
    for (double v : y) {
      const double z = (v - s.mean) / std::sqrt(s.variance);
      m3 += z * z * z / n;
      m4 += z * z * z * z / n;
    }
    // normal-theory standard errors of skewness and kurtosis
    CHECK(std::abs(m3) < 4 * std::sqrt(6.0 / n));
    CHECK(std::abs(m4 - 3.0) < 4 * std::sqrt(24.0 / n));
  }

  TEST_CASE("stationarity and spectral fidelity") {
    const auto mu = wave_atoms(2, 32);
    const SpectralMeasure m = mu;
    const auto model = std::make_shared<const FieldModel>(mu);
    const int n = 20000;
    const std::vector<Eigen::VectorXd> lags{vec({0.5, 0}),  vec({1, 0}),    vec({0, 1.5}), vec({2, 2}),
                                            vec({-3, 1}),   vec({0.3, -4}), vec({5, 0}),   vec({1, 7})};
    const Eigen::VectorXd base1 = vec({0, 0}), base2 = vec({13.1, -4.2});
    std::vector<std::vector<double>> p1(lags.size(), std::vector<double>(n)), p2 = p1;
    for (int i = 0; i < n; ++i) {
      const FieldRealization r(model, derive_seed(2, "stat", 0, i));
      const double y1 = r.value(base1)[0], y2 = r.value(base2)[0];
      for (std::size_t k = 0; k < lags.size(); ++k) {
        p1[k][i] = y1 * r.value(base1 + lags[k])[0];
        p2[k][i] = y2 * r.value(base2 + lags[k])[0];
      }
    }
    for (std::size_t k = 0; k < lags.size(); ++k) {
      const auto s1 = summarize(p1[k]), s2 = summarize(p2[k]);
      const double expect = covariance_eval(m, lags[k])(0, 0).real();
      CHECK(std::abs(s1.mean - expect) < 3.5 * s1.se_mean);
      CHECK(std::abs(s1.mean - s2.mean) < 3.5 * std::hypot(s1.se_mean, s2.se_mean));
    }
  }

  TEST_CASE("pair process is uncorrelated at lag pi") {
    const auto mu = sinc_atoms(256);
    AtomicMeasure pair;
    pair.dim_target = 2;
    for (const auto& a : mu.atoms) {
      Eigen::VectorXcd b(2);
      b << 1.0, std::exp(cdouble(0, 2 * pi * a.freq[0] * pi));
      pair.atoms.push_back({a.freq, HermitianForm::rank_one(b, a.form(0, 0).real())});
    }
    const auto model = std::make_shared<const FieldModel>(pair);
    const int n = 10000;
    std::vector<double> x(n), y(n);
    for (int i = 0; i < n; ++i) {
      const auto v = FieldRealization(model, derive_seed(3, "pair", 0, i)).value(vec({0.0}));
      x[i] = v[0];
      y[i] = v[1];
    }
    CHECK(std::abs(sample_covariance(x, y)) < 4.0 / std::sqrt(n));
  }

  TEST_CASE("analytic derivatives match finite differences") {
    const auto real = sample_field(wave_atoms(2, 64), 5);
    Rng rng(6);
    const double h = 1e-5;
    for (int t = 0; t < 100; ++t) {
      const Eigen::VectorXd v = vec({10 * standard_normal(rng), 10 * standard_normal(rng)});
      const auto g = real.gradient(v);
      const auto hs = real.hessian(v);
      for (int i = 0; i < 2; ++i) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(2);
        e[i] = h;
        const double fd = (real.value(v + e)[0] - real.value(v - e)[0]) / (2 * h);
        CHECK(g(0, i) == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
        const Eigen::MatrixXd gd = (real.gradient(v + e) - real.gradient(v - e)) / (2 * h);
        for (int j = 0; j < 2; ++j) CHECK(hs(i, j) == doctest::Approx(gd(0, j)).epsilon(1e-6).scale(1.0));
      }
    }
  }

  TEST_CASE("a zero-frequency atom contributes no gradient") {
    AtomicMeasure mu;
    mu.dim_freq = 2;
    mu.atoms.push_back({vec({0, 0}), HermitianForm::scalar(2.0)});
    const auto real = sample_field(mu, 3);
    std::vector<Eigen::VectorXd> pts{vec({0, 0}), vec({3, -1})};
    const auto jets = eval_jet(real, pts, 2);
    for (const auto& j : jets) {
      CHECK(j.gradient.norm() == 0.0);
      CHECK(j.hessian[0].norm() == 0.0);
      CHECK(j.value[0] == doctest::Approx(jets[0].value[0]));
    }
  }

  TEST_CASE("random wave gradients have unit variance") {
    const auto model = std::make_shared<const FieldModel>(wave_atoms(2, 512));
    const int n = 20000;
    std::vector<double> g(n), y(n);
    for (int i = 0; i < n; ++i) {
      const FieldRealization r(model, derive_seed(4, "wave", 0, i));
      g[i] = r.gradient(vec({0, 0}))(0, 0);
      y[i] = r.value(vec({0, 0}))[0];
    }
    const auto s = summarize(g);
    CHECK(std::abs(s.variance - 1.0) < 3 * s.se_variance);
    // first derivatives are uncorrelated with the value
    CHECK(std::abs(sample_covariance(g, y)) < 4.0 / std::sqrt(n));
  }

  TEST_CASE("isotropic wave attains the lower bound of the Hessian constant") {
    const auto model = std::make_shared<const FieldModel>(wave_atoms(2, 512));
    const int n = 40000;
    std::vector<double> h12(n);
    for (int i = 0; i < n; ++i) h12[i] = std::pow(FieldRealization(model, derive_seed(5, "beta", 0, i)).hessian(vec({0, 0}))(0, 1), 2);
    const auto s = summarize(h12);
    CHECK(s.mean == doctest::Approx(beta0(2)).epsilon(0.02));
  }

  TEST_CASE("grid phase evaluators agree with pointwise evaluation") {
    const auto mu = wave_atoms(2, 64);
    const FieldModel model(mu);
    const auto real = sample_field(mu, 8);
    const GridPhases2D g2(model, -1.0, 2.0, 0.1, 7, 5);
    const auto vals = g2.evaluate(real), dx = g2.evaluate(real, 0, 0), dy = g2.evaluate(real, 0, 1);
    for (int j = 0; j < 5; ++j)
      for (int i = 0; i < 7; ++i) {
        const Eigen::VectorXd p = vec({-1.0 + 0.1 * i, 2.0 + 0.1 * j});
        CHECK(vals(j, i) == doctest::Approx(real.value(p)[0]).epsilon(1e-10).scale(1.0));
        CHECK(dx(j, i) == doctest::Approx(real.gradient(p)(0, 0)).epsilon(1e-10).scale(1.0));
        CHECK(dy(j, i) == doctest::Approx(real.gradient(p)(0, 1)).epsilon(1e-10).scale(1.0));
      }
    const auto s1 = sinc_atoms(64);
    const FieldModel m1(s1);
    const auto r1 = sample_field(s1, 9);
    const GridPhases1D g1(m1, 0.5, 0.25, 11);
    const auto v1 = g1.evaluate(r1), d1 = g1.evaluate(r1, 0, 1);
    for (int i = 0; i < 11; ++i) {
      CHECK(v1[i] == doctest::Approx(r1.value(vec({0.5 + 0.25 * i}))[0]).epsilon(1e-10).scale(1.0));
      CHECK(d1[i] == doctest::Approx(r1.gradient(vec({0.5 + 0.25 * i}))(0, 0)).epsilon(1e-10).scale(1.0));
    }
  }
}
