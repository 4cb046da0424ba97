#include "chaosvar/hermitian_form.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "chaosvar/error.hpp"

namespace chaosvar {

HermitianForm::HermitianForm(const Eigen::MatrixXcd& m, double tol) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw std::invalid_argument("HermitianForm: matrix must be square and non-empty");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (!(asym <= tol * scale)) throw NumericalError("HermitianForm: matrix is not Hermitian");
  m_ = 0.5 * (m + m.adjoint());
}

HermitianForm HermitianForm::scalar(double w) {
  return HermitianForm(Eigen::MatrixXcd::Constant(1, 1, w), Trusted{});
}

HermitianForm HermitianForm::zero(int n) {
  return HermitianForm(Eigen::MatrixXcd::Zero(n, n), Trusted{});
}

HermitianForm HermitianForm::identity(int n, double scale) {
  return HermitianForm(scale * Eigen::MatrixXcd::Identity(n, n), Trusted{});
}

HermitianForm HermitianForm::from_real(const Eigen::MatrixXd& m) {
  return HermitianForm(m.cast<cdouble>());
}

HermitianForm HermitianForm::rank_one(const Eigen::VectorXcd& a, double weight) {
  Eigen::MatrixXcd m = weight * (a * a.adjoint());
  return HermitianForm(0.5 * (m + m.adjoint()), Trusted{});
}

double HermitianForm::trace() const { return m_.trace().real(); }

double HermitianForm::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m_, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

bool HermitianForm::is_psd(double rel_tol) const {
  const double tr = std::max(std::abs(trace()), 1e-300);
  return min_eigenvalue() >= -rel_tol * tr;
}

bool HermitianForm::is_real(double tol) const {
  const double scale = std::max(1e-300, m_.cwiseAbs().maxCoeff());
  return m_.imag().cwiseAbs().maxCoeff() <= tol * scale;
}

HermitianForm HermitianForm::conj() const { return HermitianForm(m_.conjugate(), Trusted{}); }

HermitianForm HermitianForm::kron(const HermitianForm& o) const {
  const int a = dim(), b = o.dim();
  Eigen::MatrixXcd k(a * b, a * b);
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < a; ++j) k.block(i * b, j * b, b, b) = m_(i, j) * o.m_;
  return HermitianForm(k, Trusted{});
}

Eigen::MatrixXcd HermitianForm::psd_sqrt() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m_);
  const double tr = std::max(std::abs(trace()), 1e-300);
  if (es.eigenvalues()(0) < -1e-10 * tr)
    throw NumericalError("psd_sqrt: form is not positive semi-definite");
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal();
}

HermitianForm& HermitianForm::operator+=(const HermitianForm& o) {
  if (o.dim() != dim()) throw std::invalid_argument("HermitianForm: dimension mismatch");
  m_ += o.m_;
  return *this;
}

HermitianForm& HermitianForm::operator*=(double s) {
  m_ *= s;
  return *this;
}

double max_abs_diff(const HermitianForm& a, const HermitianForm& b) {
  return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

}  // namespace chaosvar
