#pragma once

#include <complex>

#include <Eigen/Dense>

namespace chaosvar {

using cdouble = std::complex<double>;

// Complex Hermitian n x n form. Construction checks conjugate symmetry to
// 1e-12 relative to the largest entry and then stores the exact Hermitian part.
class HermitianForm {
 public:
  HermitianForm() : m_(Eigen::MatrixXcd::Zero(1, 1)) {}
  explicit HermitianForm(const Eigen::MatrixXcd& m, double tol = 1e-12);

  static HermitianForm scalar(double w);
  static HermitianForm zero(int n);
  static HermitianForm identity(int n, double scale = 1.0);
  static HermitianForm from_real(const Eigen::MatrixXd& m);
  static HermitianForm rank_one(const Eigen::VectorXcd& a, double weight = 1.0);  // w a a^H

  int dim() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return m_; }
  cdouble operator()(int i, int j) const { return m_(i, j); }

  double trace() const;
  double min_eigenvalue() const;
  // smallest eigenvalue >= -rel_tol * max(trace, tiny)
  bool is_psd(double rel_tol = 1e-10) const;
  bool is_real(double tol = 1e-12) const;

  HermitianForm conj() const;
  HermitianForm kron(const HermitianForm& o) const;  // this (x) o, row index i*dim(o)+j

  // Factor L with L L^H = this, by eigendecomposition with clamping at 0.
  // Throws NumericalError if the form is not PSD within 1e-10 * trace.
  Eigen::MatrixXcd psd_sqrt() const;

  HermitianForm& operator+=(const HermitianForm& o);
  HermitianForm& operator*=(double s);
  friend HermitianForm operator+(HermitianForm a, const HermitianForm& b) { return a += b; }
  friend HermitianForm operator*(double s, HermitianForm a) { return a *= s; }

 private:
  struct Trusted {};
  HermitianForm(const Eigen::MatrixXcd& m, Trusted) : m_(m) {}
  Eigen::MatrixXcd m_;
};

// max |a_ij - b_ij|
double max_abs_diff(const HermitianForm& a, const HermitianForm& b);

}  // namespace chaosvar
