#include <doctest.h>

#include <Eigen/Dense>

#include "chaosvar/error.hpp"
#include "chaosvar/measure_json.hpp"
#include "chaosvar/spectral_measure.hpp"

using namespace chaosvar;
using nlohmann::json;

namespace {

bool same_measure(const SpectralMeasure& a, const SpectralMeasure& b) {
  const auto qa = quadrature_atoms(a), qb = quadrature_atoms(b);
  if (qa.size() != qb.size()) return false;
  for (std::size_t i = 0; i < qa.size(); ++i)
    if ((qa[i].freq - qb[i].freq).norm() != 0.0 || max_abs_diff(qa[i].form, qb[i].form) != 0.0) return false;
  return true;
}

}  // namespace

TEST_SUITE("measure_json") {
  TEST_CASE("tensor round trip") {
    SymTensor t(3, 2);
    t.set({0, 0, 1}, 0.1);
    t.set({1, 1, 1}, -2.5e-17);
    const json j = tensor_to_json(t);
    CHECK(j["order"] == 3);
    const SymTensor back = tensor_from_json(j);
    CHECK(back.get({1, 0, 0}) == 0.1);
    CHECK(back.get({1, 1, 1}) == -2.5e-17);
  }

  TEST_CASE("measure round trips are exact") {
    AtomicMeasure a;
    a.dim_freq = 1;
    a.dim_target = 2;
    Eigen::MatrixXcd m(2, 2);
    m << 1.0, cdouble(0.1, 0.3), cdouble(0.1, -0.3), 0.7;
    Eigen::VectorXd xi(1);
    xi[0] = 0.123456789012345;
    a.atoms.push_back({xi, HermitianForm(m)});
    a.atoms.push_back({-xi, HermitianForm(m).conj()});
    const SpectralMeasure atomic = a;
    CHECK(same_measure(measure_from_json(measure_to_json(atomic)), atomic));

    const SpectralMeasure wave = random_wave(3);
    CHECK(same_measure(measure_from_json(measure_to_json(wave)), wave));

    const SpectralMeasure lifted = hessian_jet_lift(random_wave(2), 0.5, 0.29);
    CHECK(same_measure(measure_from_json(measure_to_json(lifted)), lifted));

    const SpectralMeasure gauss = gaussian_covariance_density(2, 1.3, 16);
    CHECK(same_measure(measure_from_json(measure_to_json(gauss)), gauss));
  }

  TEST_CASE("shorthands") {
    const auto w = measure_from_json(json{{"kind", "random_wave"}, {"dim_freq", 2}});
    CHECK(std::holds_alternative<SphereDensity>(w));
    const auto u = measure_from_json(
        json{{"kind", "uniform_interval"}, {"half_width", 0.5}, {"density", 1.0}, {"per_axis", 10}});
    CHECK(total_mass(u)(0, 0).real() == doctest::Approx(1.0));
    const auto g = measure_from_json(
        json{{"kind", "gaussian_covariance"}, {"dim_freq", 1}, {"scale", 1.0}, {"per_axis", 64}});
    CHECK(total_mass(g)(0, 0).real() == doctest::Approx(1.0).epsilon(1e-8));
  }

  TEST_CASE("malformed input") {
    CHECK_THROWS_AS(measure_from_json(json{{"kind", "nonsense"}}), ConfigError);
    CHECK_THROWS_AS(measure_from_json(json{{"kind", "atomic"}, {"version", 7}}), ConfigError);
    CHECK_THROWS_AS(form_from_json(json{{"re", {{1.0, 2.0}}}}), ConfigError);
  }
}
