#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "chaosvar/rng.hpp"
#include "chaosvar/spectral_measure.hpp"

namespace chaosvar {

// Ball-mass ratios nu(B(0,R)) / Vol(B(0,R)) with Monte Carlo standard errors.
struct ScalarMeasureEstimate {
  std::vector<double> radii;
  std::vector<double> ball_ratios;
  std::vector<double> mc_error;
};

// A finite positive scalar measure given by its mass and a sampler of the
// normalized probability.
struct MeasureSampler {
  int dim = 1;
  double mass = 1.0;
  std::function<void(Rng&, std::span<double>)> draw;
};

MeasureSampler gaussian_sampler(int d);
MeasureSampler uniform_box_sampler(int d, double half_width);
MeasureSampler sphere_sampler(int d, double rho);
// Atoms weighted by the trace of their forms.
MeasureSampler atomic_sampler(const AtomicMeasure& mu);
// Push-forward of nu_1 (x) ... (x) nu_m by addition.
MeasureSampler sum_sampler(std::vector<MeasureSampler> parts);

double ball_volume(int d, double r);
double sphere_area(int d);  // area of the unit sphere S^{d-1}

ScalarMeasureEstimate density_at_zero(const MeasureSampler& nu, std::span<const double> radii,
                                      std::size_t samples, std::uint64_t seed);

// Density of sigma_rho * sigma_rho (sigma_rho uniform probability on the sphere
// of radius rho in R^d), d >= 2.
double sphere_conv_normalization(int d, double rho);
double sphere_conv_density(int d, double rho, const Eigen::VectorXd& x);
double sphere_conv_density_radial(int d, double rho, double r);
// Average of the density over the shell a <= |x| < b.
double sphere_conv_shell_average(int d, double rho, double a, double b);
// |sigma_rho * sigma_rho|_2^2, finite for d >= 3.
double sphere_conv_l2_squared(int d, double rho);

struct ShellHistogram {
  std::vector<double> edges;
  std::vector<double> density;
  std::vector<double> se;
};
// Empirical density of |x1 + x2| over shells, x_i uniform on the radius-rho sphere.
ShellHistogram sphere_pair_histogram(int d, double rho, std::span<const double> edges,
                                     std::size_t samples, std::uint64_t seed);

// P(|c + x| < R) for x uniform on the radius-rho sphere in R^d and |c| = c_norm.
double sphere_ball_hit_probability(int d, double rho, double c_norm, double R);

// sigma^{*4}(B(0,R)) / Vol(B(0,R)) for the unit sphere: three points are sampled
// and the probability that the fourth lands in the ball is integrated exactly.
ScalarMeasureEstimate conv4_near_zero(int d, std::span<const double> radii, std::size_t samples,
                                      std::uint64_t seed);

}  // namespace chaosvar
