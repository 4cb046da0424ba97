#include "chaosvar/test_function.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/special_functions/bessel.hpp>

#include "chaosvar/error.hpp"
#include "chaosvar/measure_estimates.hpp"

namespace chaosvar {

namespace {
constexpr double kPi = std::numbers::pi;
}

TestFunction::TestFunction(Kind kind, int d) : kind_(kind), d_(d) {
  if (d < 1) throw std::invalid_argument("TestFunction: d >= 1");
  norm_ = kind == Kind::Ball ? 1.0 / std::sqrt(ball_volume(d, 1.0)) : std::pow(kPi, -0.25 * d);
}

TestFunction TestFunction::from_name(const std::string& name, int d) {
  if (name == "ball") return TestFunction(Kind::Ball, d);
  if (name == "gaussian") return TestFunction(Kind::Gaussian, d);
  throw ConfigError("unknown test function '" + name + "' (expected ball or gaussian)");
}

std::string TestFunction::name() const { return kind_ == Kind::Ball ? "ball" : "gaussian"; }

double TestFunction::value_radial(double r) const {
  if (kind_ == Kind::Ball) return r <= 1.0 ? norm_ : 0.0;
  return norm_ * std::exp(-0.5 * r * r);
}

double TestFunction::gamma_radial(double r) const {
  if (kind_ == Kind::Gaussian)
    return std::pow(2.0, d_) * std::pow(kPi, 0.5 * d_) * std::exp(-4.0 * kPi * kPi * r * r);
  const double vol = ball_volume(d_, 1.0);
  const double nu = 0.5 * d_;
  const double x = 2.0 * kPi * r;
  if (x < 1e-6) {
    // J_nu(x) / x^nu -> 2^{-nu} / Gamma(nu + 1); gamma(0) = Vol B
    const double c = std::pow(kPi, nu) / std::tgamma(nu + 1.0) * (1.0 - x * x / (4.0 * (nu + 1.0)));
    return c * c / vol;
  }
  const double j = boost::math::cyl_bessel_j(nu, x);
  return j * j / (vol * std::pow(r, d_));
}

double TestFunction::gamma_lambda(const Eigen::VectorXd& xi, double lambda) const {
  return std::pow(lambda, d_) * gamma_radial(lambda * xi.norm());
}

double TestFunction::support_radius() const { return kind_ == Kind::Ball ? 1.0 : 8.5; }

double TestFunction::integral() const {
  if (kind_ == Kind::Ball) return std::sqrt(ball_volume(d_, 1.0));
  return std::pow(kPi, -0.25 * d_) * std::pow(2.0 * kPi, 0.5 * d_);
}

}  // namespace chaosvar
