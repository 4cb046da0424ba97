#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "chaosvar/error.hpp"
#include "chaosvar/gauss_hermite.hpp"
#include "chaosvar/quadrature.hpp"
#include "chaosvar/rng.hpp"
#include "chaosvar/stats.hpp"

using namespace chaosvar;

namespace {

double factorial(int q) { return std::tgamma(q + 1.0); }

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// E[g(N)] for standard N in one dimension by composite Gauss-Legendre on [-14, 14];
// shares no code with the Golub-Welsch rule.
double normal_expectation_1d(const std::function<double(double)>& g) {
  const double c = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  return integrate_composite([&](double x) { return g(x) * c * std::exp(-0.5 * x * x); }, -14.0,
                             14.0, 112, 16);
}

std::vector<double> random_vector(int n, Rng& rng, double scale = 1.0) {
  std::vector<double> v(n);
  for (auto& x : v) x = scale * standard_normal(rng);
  return v;
}

}  // namespace

TEST_SUITE("gauss_hermite") {
  TEST_CASE("hermite polynomials satisfy the three-term recurrence values") {
    const auto h = hermite_polys(2.0, 4);
    CHECK(h[0] == 1.0);
    CHECK(h[1] == 2.0);
    CHECK(h[2] == doctest::Approx(3.0));
    CHECK(h[3] == doctest::Approx(2.0));   // x^3 - 3x
    CHECK(h[4] == doctest::Approx(-5.0));  // x^4 - 6x^2 + 3
  }

  TEST_CASE("Gauss-Hermite rule integrates normal moments") {
    const auto rule = gauss_hermite_rule(6);
    double w = 0.0, m2 = 0.0, m4 = 0.0, m10 = 0.0, m11 = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double x = rule.nodes[i];
      w += rule.weights[i];
      m2 += rule.weights[i] * x * x;
      m4 += rule.weights[i] * std::pow(x, 4);
      m10 += rule.weights[i] * std::pow(x, 10);
      m11 += rule.weights[i] * std::pow(x, 11);
    }
    CHECK(w == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(m2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m4 == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(m10 == doctest::Approx(945.0).epsilon(1e-11));
    CHECK(std::abs(m11) < 1e-9);
  }

  TEST_CASE("hermite form of low order") {
    std::vector<double> x{0.7, -1.3};
    const auto h0 = hermite_form(x, 0);
    CHECK(h0.get({}) == 1.0);
    const auto h1 = hermite_form(x, 1);
    CHECK(h1.get({0}) == 0.7);
    CHECK(h1.get({1}) == -1.3);
    std::vector<double> x1{2.0}, w1{1.0};
    CHECK(hermite_form(x1, 2).evaluate(w1) == doctest::Approx(3.0));
    const auto h2 = hermite_form(x, 2);
    CHECK(h2.get({0, 1}) == doctest::Approx(0.7 * -1.3));
    CHECK(h2.get({1, 1}) == doctest::Approx(1.3 * 1.3 - 1.0));
  }

  TEST_CASE("orthogonality relations") {
    Rng rng(21);
    for (int n = 1; n <= 3; ++n) {
      const auto w = random_vector(n, rng, 0.6), u = random_vector(n, rng, 0.6);
      const auto rule = gauss_hermite_rule(8);
      for (int q = 0; q <= 6; ++q)
        for (int qp = 0; qp <= 6; ++qp) {
          // tensor quadrature over n axes, exact for total degree <= 15 per axis
          double acc = 0.0;
          std::vector<int> k(n, 0);
          std::vector<double> pt(n);
          while (true) {
            double wt = 1.0;
            for (int j = 0; j < n; ++j) {
              pt[j] = rule.nodes[k[j]];
              wt *= rule.weights[k[j]];
            }
            acc += wt * hermite_form(pt, q).evaluate(w) * hermite_form(pt, qp).evaluate(u);
            int j = 0;
            while (j < n && ++k[j] == static_cast<int>(rule.nodes.size())) k[j++] = 0;
            if (j == n) break;
          }
          const double expect = q == qp ? factorial(q) * std::pow(dot(w, u), q) : 0.0;
          CHECK(acc == doctest::Approx(expect).epsilon(1e-8).scale(1.0));
        }
    }
  }

  TEST_CASE("generating identity within the Taylor remainder") {
    Rng rng(4);
    for (int trial = 0; trial < 20; ++trial) {
      auto w = random_vector(2, rng);
      const double nw = std::hypot(w[0], w[1]);
      for (auto& v : w) v *= uniform01(rng) / nw;  // |w| < 1
      const auto x = random_vector(2, rng);
      double series = 0.0;
      for (int q = 0; q <= 12; ++q) series += hermite_form(x, q).evaluate(w) / factorial(q);
      const double exact = std::exp(dot(w, x) - dot(w, w) / 2.0);
      // |H_x^q(w)| <= |w|^q E|<e, x + iN>|^q style bound: use Cramer's inequality
      // |He_q(t)| <= 1.0865 sqrt(q!) e^{t^2/4} along the unit direction of w
      const double t = dot(w, x) / std::max(std::sqrt(dot(w, w)), 1e-300);
      double bound = 0.0;
      for (int q = 13; q <= 80; ++q)
        bound += 1.0865 * std::sqrt(factorial(q)) * std::exp(t * t / 4.0) *
                 std::pow(std::sqrt(dot(w, w)), q) / factorial(q);
      CHECK(std::abs(series - exact) <= bound + 1e-13);
    }
  }

  TEST_CASE("projection of a Hermite form") {
    std::vector<double> w0{0.4, -0.9};
    const ScalarFunction f = [&](std::span<const double> x) { return hermite_form(x, 3).evaluate(w0); };
    const auto scheme = ProjectionScheme::automatic(2, 3);
    const auto f3 = chaos_project(f, 2, 3, scheme);
    // f_3 = q! w0^{(x)3} in the unnormalized convention
    const auto expect = SymTensor::outer_power(w0, 3);
    for (const auto& [idx, v] : expect.entries()) CHECK(f3.get(idx) == doctest::Approx(6.0 * v).epsilon(1e-10));
    CHECK(chaos_project(f, 2, 2, scheme).max_abs() < 1e-10);
  }

  TEST_CASE("projection of the squared norm") {
    const ScalarFunction f = [](std::span<const double> x) { return x[0] * x[0] + x[1] * x[1]; };
    const auto ex = chaos_expand(f, 2, 2, ProjectionScheme::automatic(2, 2));
    CHECK(ex.coeffs[0].get({}) == doctest::Approx(2.0));
    CHECK(ex.coeffs[1].max_abs() < 1e-12);
    CHECK(ex.coeffs[2].get({0, 0}) == doctest::Approx(2.0));
    CHECK(ex.coeffs[2].get({1, 1}) == doctest::Approx(2.0));
    CHECK(std::abs(ex.coeffs[2].get({0, 1})) < 1e-12);
  }

  TEST_CASE("difference of squares against a one-dimensional oracle") {
    const ScalarFunction f = [](std::span<const double> x) { return (x[0] * x[0] - 1) - (x[1] * x[1] - 1); };
    const auto f2 = chaos_project(f, 2, 2, ProjectionScheme::automatic(2, 2));
    // f_2(e_1, e_1) = E[(x^2 - 1)^2] computed on one axis
    const double oracle = normal_expectation_1d([](double t) { return (t * t - 1) * (t * t - 1); });
    CHECK(oracle == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(f2.get({0, 0}) == doctest::Approx(oracle).epsilon(1e-10));
    CHECK(f2.get({1, 1}) == doctest::Approx(-oracle).epsilon(1e-10));
    CHECK(std::abs(f2.get({0, 1})) < 1e-12);
  }

  TEST_CASE("series evaluation") {
    std::vector<SymTensor> only_const{SymTensor::scalar(3.5)};
    std::vector<double> x{0.1, 7.0};
    CHECK(hermite_eval_series(only_const, x) == 3.5);

    const ScalarFunction cube = [](std::span<const double> v) { return v[0] * v[0] * v[0]; };
    const auto ex = chaos_expand(cube, 1, 3, ProjectionScheme::automatic(1, 3));
    std::vector<double> two{2.0};
    CHECK(hermite_eval_series(ex.coeffs, two) == doctest::Approx(8.0).epsilon(1e-8));
  }

  TEST_CASE("round trip of a degree-four polynomial") {
    const ScalarFunction p = [](std::span<const double> v) {
      return 1.0 - v[0] + 0.5 * v[0] * v[1] + v[1] * v[1] * v[1] - 0.25 * v[0] * v[0] * v[1] * v[1] +
             0.1 * std::pow(v[0], 4);
    };
    const auto ex = chaos_expand(p, 2, 4, ProjectionScheme::automatic(2, 4));
    Rng rng(8);
    for (int i = 0; i < 25; ++i) {
      const auto x = random_vector(2, rng, 2.0);
      CHECK(hermite_eval_series(ex.coeffs, x) == doctest::Approx(p(x)).epsilon(1e-8).scale(1.0));
    }
  }

  TEST_CASE("covariance series") {
    std::vector<double> w{0.3, 0.8};
    std::vector<SymTensor> f{SymTensor::scalar(0.0), SymTensor::vector(w)};
    Eigen::MatrixXd om(2, 2);
    om << 0.5, 0.1, 0.1, 0.3;
    const auto r = covariance_series(f, f, om, 1);
    CHECK(r.value == doctest::Approx(0.5 * 0.09 + 2 * 0.1 * 0.24 + 0.3 * 0.64));
  }

  TEST_CASE("identity coupling reproduces the variance of a polynomial") {
    const ScalarFunction p = [](std::span<const double> v) {
      return v[0] * v[1] + std::pow(v[0], 3) - 2.0 * v[1] * v[1] + 0.5;
    };
    const auto ex = chaos_expand(p, 2, 3, ProjectionScheme::automatic(2, 3));
    const auto r = covariance_series(ex.coeffs, ex.coeffs, Eigen::MatrixXd::Identity(2, 2), 3);
    // E p = -1.5, E p^2 = 1 + 15 + 12 + 0.25 - 2
    const double second = 26.25, mean = -1.5;
    CHECK(r.value == doctest::Approx(second - mean * mean).epsilon(1e-10));
  }

  TEST_CASE("Monte Carlo projection agrees with quadrature") {
    const ScalarFunction p = [](std::span<const double> v) { return std::abs(v[0]) * (1.0 + v[1]); };
    ProjectionScheme mc;
    mc.kind = ProjectionScheme::Kind::MonteCarlo;
    mc.samples = 400000;
    mc.seed = 3;
    mc.max_relative_se = 0.2;
    const auto ex = chaos_expand(p, 2, 2, mc);
    const double c = std::sqrt(2.0 / std::numbers::pi);  // E|x|, and E|x|^3 = 2c
    CHECK(ex.coeffs[1].get({1}) == doctest::Approx(c).epsilon(0.02));
    CHECK(ex.coeffs[2].get({0, 0}) == doctest::Approx(c).epsilon(0.03));
    CHECK(std::abs(ex.coeffs[2].get({1, 1})) < 0.02);
    mc.max_relative_se = 1e-6;
    CHECK_THROWS_AS(chaos_project(p, 2, 2, mc), NumericalError);
  }

  TEST_CASE("whitening is invertible and whitened samples are standard") {
    Eigen::MatrixXd c(3, 3);
    c << 2.0, 0.5, 0.1, 0.5, 1.0, -0.3, 0.1, -0.3, 0.7;
    GaussianSpace g(c);
    Eigen::VectorXd x(3);
    x << 0.3, -2.0, 1.1;
    CHECK((g.unwhiten(g.whiten(x)) - x).norm() < 1e-12);
    CHECK((g.whiten(g.unwhiten(x)) - x).norm() < 1e-12);

    Rng rng(12);
    Eigen::LLT<Eigen::MatrixXd> llt(c);
    const Eigen::MatrixXd L = llt.matrixL();
    const int n = 50000;
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(3, 3);
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXd z(3);
      for (int j = 0; j < 3; ++j) z[j] = standard_normal(rng);
      const Eigen::VectorXd w = g.whiten(L * z);
      acc += w * w.transpose() / n;
    }
    // entries of the sample covariance have SE about 1/sqrt(n) off-diagonal, sqrt(2/n) diagonal
    CHECK((acc - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 4.0 * std::sqrt(2.0 / n));
  }

  TEST_CASE("homogeneous functionals: E[G(X)(|X|^2 - n)] = m E[G(X)]") {
    // G = |det| on 3x3 matrices, homogeneous of degree 3
    Rng rng(31);
    const int n = 200000;
    std::vector<double> lhs(n);
    for (int i = 0; i < n; ++i) {
      Eigen::Matrix3d m;
      double sq = 0.0;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          m(a, b) = standard_normal(rng);
          sq += m(a, b) * m(a, b);
        }
      const double g = std::abs(m.determinant());
      lhs[i] = g * (sq - 9.0) - 3.0 * g;
    }
    const auto s = summarize(lhs);
    CHECK(std::abs(s.mean) <= 3.0 * s.se_mean);
  }
}
