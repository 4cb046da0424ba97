#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "chaosvar/chaos_coeffs.hpp"
#include "chaosvar/spectral_measure.hpp"

namespace chaosvar {

enum class BerryRegime { Log, Constant };

struct BerrySpec {
  // Ball radii for the d = 2 log regime, in units of the sphere radius.
  std::vector<double> radii{0.1, 0.03, 0.01};
  std::size_t samples = 200000;
  int theta_nodes = 64;    // direction grid of the positivity certificate
  int circle_nodes = 32;   // nodes on the intersection circles (d = 3)
  std::uint64_t seed = 5;
  double max_relative_se = 0.05;
};

struct BerryRate {
  BerryRegime regime = BerryRegime::Log;
  double rate = 0.0;
  double se = 0.0;
  // restricted integrand Tr(f4 Psi(0, theta) f4 Psi(0, theta)) over the theta grid
  std::vector<Eigen::VectorXd> theta;
  std::vector<double> theta_integrand;
  double theta_mean = 0.0;
  double certificate_min = 0.0;
  bool certificate_ok = false;
  // d = 2: weighted four-fold ball ratios and their ratio to |log R|
  std::vector<double> radii;
  std::vector<double> ball_ratios, ball_ratio_se, ratio_over_log;
  double spread = 0.0;
  // d = 3: deterministic quadrature of the same constant
  double quadrature = 0.0;
};

// Psi^r at x for the sphere density: 4 pi^2 times the average over the
// intersection B_x = {y : |y| = |y - x| = rho} of s(y) (x) s(y - x) (x) sym(y (y - x)^T),
// Hermitian part. At x = 0 along theta it is 4 pi^2 int s (x) s (x) xi xi^T d sigma_theta.
Eigen::MatrixXcd restricted_psi(const SphereDensity& psi, const Eigen::VectorXd& x,
                                const Eigen::VectorXd& theta, int circle_nodes, double phase = 0.0);

// Tr(f4 Psi f4 Psi) at x (direction theta used when x = 0).
double restricted_integrand(const SphereDensity& psi, const NodalChaosCoeffs& c, const Eigen::VectorXd& x,
                            const Eigen::VectorXd& theta, int circle_nodes, double phase = 0.0);

// Contribution of the restricted integrand to lim Var(Z^(4)) / log lambda
// (d = 2) or lim Var(Z^(4)) (d = 3), including the 1 / 4! factor.
// d = 2: log regime, rate = slope of the weighted sigma^{*4} ball ratio in
// log(1/R) over the radii. d = 3: constant int T(x) p(x)^2 dx / 4! with p the
// closed-form sigma * sigma density, estimated by MC (rate, se) and by quadrature.
BerryRate berry_fourth_chaos_rate(int d, const SphereDensity& psi, const NodalChaosCoeffs& coeffs,
                                  const BerrySpec& spec = {});

}  // namespace chaosvar
