#include <doctest.h>

#include <complex>

#include <Eigen/Dense>

#include "chaosvar/error.hpp"
#include "chaosvar/hermitian_form.hpp"

using namespace chaosvar;

TEST_SUITE("hermitian_form") {
  TEST_CASE("construction checks conjugate symmetry") {
    Eigen::MatrixXcd m(2, 2);
    m << 1.0, cdouble(0.5, 0.25), cdouble(0.5, -0.25), 2.0;
    const HermitianForm h(m);
    CHECK(h.trace() == doctest::Approx(3.0));
    CHECK(h.is_psd());
    CHECK_FALSE(h.is_real());
    m(0, 1) = cdouble(0.5, 0.3);
    CHECK_THROWS_AS(HermitianForm{m}, NumericalError);
  }

  TEST_CASE("rank one forms and square roots") {
    Eigen::VectorXcd a(3);
    a << 1.0, cdouble(0.0, 2.0), cdouble(-1.0, 0.5);
    const auto h = HermitianForm::rank_one(a, 0.5);
    CHECK(h.trace() == doctest::Approx(0.5 * a.squaredNorm()));
    CHECK(h.min_eigenvalue() > -1e-12);
    const Eigen::MatrixXcd l = h.psd_sqrt();
    CHECK((l * l.adjoint() - h.matrix()).norm() < 1e-12);
  }

  TEST_CASE("indefinite forms are rejected by the square root") {
    Eigen::MatrixXd m(2, 2);
    m << 1.0, 0.0, 0.0, -1.0;
    const auto h = HermitianForm::from_real(m);
    CHECK_FALSE(h.is_psd());
    CHECK_THROWS_AS(h.psd_sqrt(), NumericalError);
  }

  TEST_CASE("Kronecker product layout and conjugation") {
    Eigen::MatrixXcd a(2, 2), b(2, 2);
    a << 1.0, cdouble(0, 1), cdouble(0, -1), 2.0;
    b << 3.0, 0.5, 0.5, 4.0;
    const HermitianForm ha(a), hb(b);
    const auto k = ha.kron(hb);
    CHECK(k.dim() == 4);
    CHECK(k(1 * 2 + 0, 0 * 2 + 1) == a(1, 0) * b(0, 1));
    CHECK(k.trace() == doctest::Approx(ha.trace() * hb.trace()));
    CHECK(ha.conj()(0, 1) == std::conj(a(0, 1)));
    CHECK(max_abs_diff(ha + ha, 2.0 * ha) == 0.0);
  }
}
