#pragma once

#include <string>

#include <Eigen/Dense>

namespace chaosvar {

// phi with |phi|_2 = 1 and its spectral window gamma = |phi_hat|^2.
//   Ball:     phi = 1_{B(0,1)} / sqrt(Vol B), gamma(xi) = J_{d/2}(2 pi |xi|)^2 / (Vol B |xi|^d)
//   Gaussian: phi = pi^{-d/4} e^{-|x|^2/2},   gamma(xi) = 2^d pi^{d/2} e^{-4 pi^2 |xi|^2}
class TestFunction {
 public:
  enum class Kind { Ball, Gaussian };

  TestFunction(Kind kind, int d);
  static TestFunction from_name(const std::string& name, int d);

  Kind kind() const { return kind_; }
  int dim() const { return d_; }
  std::string name() const;

  double value_radial(double r) const;
  double value(const Eigen::VectorXd& x) const { return value_radial(x.norm()); }
  double gamma_radial(double r) const;
  double gamma(const Eigen::VectorXd& xi) const { return gamma_radial(xi.norm()); }
  // gamma_lambda(xi) = lambda^d gamma(lambda xi)
  double gamma_lambda(const Eigen::VectorXd& xi, double lambda) const;
  // Radius outside which phi is zero (ball) or below 1e-15 relative (Gaussian).
  double support_radius() const;
  double integral() const;  // int phi

 private:
  Kind kind_;
  int d_;
  double norm_;  // phi value scale
};

}  // namespace chaosvar
