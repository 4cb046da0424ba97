#include <doctest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "chaosvar/berry.hpp"
#include "chaosvar/chaos_coeffs.hpp"
#include "chaosvar/error.hpp"
#include "chaosvar/spectral_measure.hpp"

using namespace chaosvar;
using std::numbers::pi;

TEST_SUITE("berry") {
  TEST_CASE("restricted form at the origin") {
    const SphereDensity wave = random_wave(2);
    Eigen::VectorXd theta(2), x = Eigen::VectorXd::Zero(2);
    theta << 1.0, 0.0;
    const Eigen::MatrixXcd p = restricted_psi(wave, x, theta, 32);
    CHECK(p.rows() == 2);
    CHECK((p - p.adjoint()).norm() < 1e-14);
    // d = 2: the (d-2)-sphere orthogonal to theta is the pair of points +-e_2,
    // so Psi = 4 pi^2 rho^2 e_2 e_2^T with rho^2 = 2 / (4 pi^2)
    CHECK(p(1, 1).real() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::abs(p(0, 0)) < 1e-12);
  }

  TEST_CASE("positivity certificate and regimes") {
    const auto c2 = chaos_coeffs(Hypothesis::H1, 2, 1, Eigen::VectorXd::Zero(1));
    BerrySpec spec;
    spec.samples = 100000;
    spec.max_relative_se = 0.2;
    const auto r2 = berry_fourth_chaos_rate(2, random_wave(2), c2, spec);
    CHECK(r2.regime == BerryRegime::Log);
    CHECK(r2.certificate_ok);
    CHECK(r2.certificate_min > 0.0);
    CHECK(r2.rate > 0.0);
    for (double b : r2.ball_ratios) CHECK(b >= 0.0);

    const auto c3 = chaos_coeffs(Hypothesis::H1, 3, 1, Eigen::VectorXd::Zero(1));
    const auto r3 = berry_fourth_chaos_rate(3, random_wave(3), c3, spec);
    CHECK(r3.regime == BerryRegime::Constant);
    CHECK(r3.certificate_ok);
    CHECK(std::abs(r3.rate - r3.quadrature) < 3 * r3.se);
  }

  TEST_CASE("unsupported inputs") {
    const auto c = chaos_coeffs(Hypothesis::H1, 2, 1, Eigen::VectorXd::Zero(1));
    CHECK_THROWS_AS(berry_fourth_chaos_rate(2, jet_lift(random_wave(2)), c, {}), ConfigError);
    ChaosExtras ex;
    ex.beta = 0.5;
    ex.alpha = 1.0;
    ex.A = 0.2;
    const auto h3 = chaos_coeffs(Hypothesis::H3, 2, 2, Eigen::VectorXd(), ex);
    CHECK_THROWS_AS(berry_fourth_chaos_rate(2, random_wave(2), h3, {}), ConfigError);
    CHECK_THROWS_AS(berry_fourth_chaos_rate(1, random_wave(1), c, {}), ConfigError);
  }
}
