#include <doctest.h>

#include <cmath>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "chaosvar/convolution.hpp"
#include "chaosvar/error.hpp"
#include "chaosvar/rng.hpp"

using namespace chaosvar;

namespace {

Eigen::VectorXd vec1(double x) {
  Eigen::VectorXd v(1);
  v[0] = x;
  return v;
}

AtomicMeasure random_measure(int d, int n, int count, Rng& rng) {
  AtomicMeasure mu;
  mu.dim_freq = d;
  mu.dim_target = n;
  for (int p = 0; p < count; ++p) {
    Eigen::VectorXd xi(d);
    for (int j = 0; j < d; ++j) xi[j] = standard_normal(rng);
    Eigen::MatrixXcd g(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) g(a, b) = cdouble(standard_normal(rng), standard_normal(rng));
    mu.atoms.push_back({xi, HermitianForm(Eigen::MatrixXcd(g * g.adjoint()))});
  }
  return mu;
}

}  // namespace

TEST_SUITE("convolution") {
  TEST_CASE("two Dirac masses") {
    AtomicMeasure a, b;
    a.atoms.push_back({vec1(0.3), HermitianForm::scalar(2.0)});
    b.atoms.push_back({vec1(-1.0), HermitianForm::scalar(0.5)});
    const auto c = convolve_atomic(a, b);
    REQUIRE(c.atoms.size() == 1);
    CHECK(c.atoms[0].freq[0] == doctest::Approx(-0.7));
    CHECK(c.atoms[0].form(0, 0).real() == doctest::Approx(1.0));
  }

  TEST_CASE("symmetric pair convolved with itself") {
    AtomicMeasure a;
    a.atoms.push_back({vec1(0.4), HermitianForm::scalar(0.5)});
    a.atoms.push_back({vec1(-0.4), HermitianForm::scalar(0.5)});
    const auto c = convolve_atomic(a, a);
    REQUIRE(c.atoms.size() == 3);
    double at0 = 0, atp = 0, atm = 0;
    for (const auto& at : c.atoms) {
      const double x = at.freq[0], w = at.form(0, 0).real();
      if (std::abs(x) < 1e-12) at0 = w;
      if (std::abs(x - 0.8) < 1e-12) atp = w;
      if (std::abs(x + 0.8) < 1e-12) atm = w;
    }
    CHECK(at0 == doctest::Approx(0.5));
    CHECK(atp == doctest::Approx(0.25));
    CHECK(atm == doctest::Approx(0.25));
  }

  TEST_CASE("positivity is preserved") {
    Rng rng(6);
    const auto a = random_measure(2, 2, 7, rng), b = random_measure(2, 3, 5, rng);
    for (bool reflect : {false, true}) {
      ConvolutionOptions opt;
      opt.conjugate_reflect = reflect;
      const auto c = convolve_atomic(a, b, opt);
      CHECK(c.dim_target == 6);
      for (const auto& at : c.atoms) CHECK(at.form.is_psd());
    }
  }

  TEST_CASE("Fourier duality: the convolution covariance is the Kronecker square") {
    Rng rng(7);
    const auto a = random_measure(2, 2, 6, rng);
    const SpectralMeasure ma = a, mc = convolve_atomic(a, a);
    for (int t = 0; t < 5; ++t) {
      Eigen::VectorXd v(2);
      v << standard_normal(rng), standard_normal(rng);
      const Eigen::MatrixXcd om = covariance_eval(ma, v);
      const Eigen::MatrixXcd kr = Eigen::kroneckerProduct(om, om);
      CHECK((covariance_eval(mc, v) - kr).cwiseAbs().maxCoeff() < 1e-9 * std::abs(om.trace() * om.trace()) + 1e-9);
    }
  }

  TEST_CASE("conjugate reflection subtracts frequencies and conjugates the second form") {
    AtomicMeasure a, b;
    a.atoms.push_back({vec1(1.0), HermitianForm::scalar(1.0)});
    Eigen::MatrixXcd m(2, 2);
    m << 1.0, cdouble(0, 1), cdouble(0, -1), 1.0;
    b.dim_target = 2;
    b.atoms.push_back({vec1(0.25), HermitianForm(m)});
    ConvolutionOptions opt;
    opt.conjugate_reflect = true;
    const auto c = convolve_atomic(a, b, opt);
    CHECK(c.atoms[0].freq[0] == doctest::Approx(0.75));
    CHECK(c.atoms[0].form(0, 1) == std::conj(m(0, 1)));
  }

  TEST_CASE("budget and merging") {
    Rng rng(8);
    const auto a = random_measure(1, 1, 100, rng);
    ConvolutionOptions opt;
    opt.budget = 5000;
    CHECK_THROWS_AS(convolve_atomic(a, a, opt), BudgetExceeded);

    AtomicMeasure dup;
    dup.atoms.push_back({vec1(0.5), HermitianForm::scalar(1.0)});
    dup.atoms.push_back({vec1(0.5 + 1e-12), HermitianForm::scalar(2.0)});
    dup.atoms.push_back({vec1(-0.5), HermitianForm::scalar(3.0)});
    const auto merged = merge_atoms(dup, 1e-9);
    CHECK(merged.atoms.size() == 2);
    double total = 0.0;
    for (const auto& at : merged.atoms) total += at.form.trace();
    CHECK(total == doctest::Approx(6.0));
  }
}
