#include "chaosvar/measure_estimates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/special_functions/beta.hpp>

#include "chaosvar/error.hpp"
#include "chaosvar/quadrature.hpp"
#include "chaosvar/stats.hpp"

namespace chaosvar {

namespace {
constexpr double kPi = std::numbers::pi;
}

double sphere_area(int d) { return 2.0 * std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d); }

double ball_volume(int d, double r) {
  return std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d + 1.0) * std::pow(r, d);
}

MeasureSampler gaussian_sampler(int d) {
  return {d, 1.0, [](Rng& rng, std::span<double> out) {
            for (double& v : out) v = standard_normal(rng);
          }};
}

MeasureSampler uniform_box_sampler(int d, double half_width) {
  return {d, 1.0, [half_width](Rng& rng, std::span<double> out) {
            for (double& v : out) v = half_width * (2.0 * uniform01(rng) - 1.0);
          }};
}

MeasureSampler sphere_sampler(int d, double rho) {
  return {d, 1.0, [rho](Rng& rng, std::span<double> out) { uniform_on_sphere(rng, rho, out); }};
}

MeasureSampler atomic_sampler(const AtomicMeasure& mu) {
  std::vector<double> cdf;
  std::vector<Eigen::VectorXd> freqs;
  double total = 0.0;
  for (const Atom& a : mu.atoms) {
    const double w = a.form.trace();
    if (w < 0.0) throw std::invalid_argument("atomic_sampler: negative trace weight");
    total += w;
    cdf.push_back(total);
    freqs.push_back(a.freq);
  }
  return {mu.dim_freq, total, [cdf, freqs, total](Rng& rng, std::span<double> out) {
            const double u = uniform01(rng) * total;
            auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
            const std::size_t k = std::min<std::size_t>(it - cdf.begin(), cdf.size() - 1);
            for (std::size_t j = 0; j < out.size(); ++j) out[j] = freqs[k](j);
          }};
}

MeasureSampler sum_sampler(std::vector<MeasureSampler> parts) {
  if (parts.empty()) throw std::invalid_argument("sum_sampler: no parts");
  const int d = parts.front().dim;
  double mass = 1.0;
  for (const auto& p : parts) {
    if (p.dim != d) throw std::invalid_argument("sum_sampler: dimension mismatch");
    mass *= p.mass;
  }
  return {d, mass, [parts, d](Rng& rng, std::span<double> out) {
            std::vector<double> tmp(d);
            std::fill(out.begin(), out.end(), 0.0);
            for (const auto& p : parts) {
              p.draw(rng, tmp);
              for (int j = 0; j < d; ++j) out[j] += tmp[j];
            }
          }};
}

ScalarMeasureEstimate density_at_zero(const MeasureSampler& nu, std::span<const double> radii,
                                      std::size_t samples, std::uint64_t seed) {
  if (!(nu.mass > 0.0)) throw std::invalid_argument("density_at_zero: zero total mass");
  if (samples < 2) throw std::invalid_argument("density_at_zero: need at least 2 samples");
  Rng rng(seed);
  std::vector<double> x(nu.dim);
  std::vector<std::size_t> hits(radii.size(), 0);
  for (std::size_t s = 0; s < samples; ++s) {
    nu.draw(rng, x);
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    const double r = std::sqrt(r2);
    for (std::size_t i = 0; i < radii.size(); ++i)
      if (r < radii[i]) ++hits[i];
  }
  ScalarMeasureEstimate est;
  const double n = static_cast<double>(samples);
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double p = hits[i] / n;
    const double vol = ball_volume(nu.dim, radii[i]);
    est.radii.push_back(radii[i]);
    est.ball_ratios.push_back(nu.mass * p / vol);
    est.mc_error.push_back(nu.mass * std::sqrt(p * (1.0 - p) / n) / vol);
  }
  return est;
}

double sphere_conv_normalization(int d, double rho) {
  if (d < 2) throw std::invalid_argument("sphere_conv_density: d >= 2 required");
  // r = 2 rho sin(t) turns the radial mass integral into a smooth one.
  const double e = d - 2.0;
  const double I = integrate_composite(
      [&](double t) { return std::pow(std::sin(t) * std::cos(t), e); }, 0.0, 0.5 * kPi, 32, 16);
  return 1.0 / (sphere_area(d) * std::pow(2.0 * rho, 2.0 * d - 4.0) * I);
}

double sphere_conv_density_radial(int d, double rho, double r) {
  if (d < 2) throw std::invalid_argument("sphere_conv_density: d >= 2 required");
  if (r <= 0.0) return INFINITY;
  if (r >= 2.0 * rho) return 0.0;
  return sphere_conv_normalization(d, rho) / r * std::pow(4.0 * rho * rho - r * r, 0.5 * (d - 3));
}

double sphere_conv_density(int d, double rho, const Eigen::VectorXd& x) {
  if (x.size() != d) throw std::invalid_argument("sphere_conv_density: dimension of x");
  return sphere_conv_density_radial(d, rho, x.norm());
}

double sphere_conv_shell_average(int d, double rho, double a, double b) {
  const double C = sphere_conv_normalization(d, rho);
  const double hi = std::min(b, 2.0 * rho);
  double mass = 0.0;
  if (hi > a) {
    // substitute r = 2 rho sin(t)
    const double ta = std::asin(std::clamp(a / (2.0 * rho), 0.0, 1.0));
    const double tb = std::asin(std::clamp(hi / (2.0 * rho), 0.0, 1.0));
    mass = C * sphere_area(d) * std::pow(2.0 * rho, 2.0 * d - 4.0) *
           integrate_composite([&](double t) { return std::pow(std::sin(t) * std::cos(t), d - 2.0); },
                               ta, tb, 16, 16);
  }
  return mass / (ball_volume(d, b) - ball_volume(d, a));
}

double sphere_conv_l2_squared(int d, double rho) {
  if (d < 3) throw std::invalid_argument("sphere_conv_l2_squared: infinite for d = 2");
  const double C = sphere_conv_normalization(d, rho);
  // int p^2 dx = S C^2 int r^{d-3} (4 rho^2 - r^2)^{d-3} dr, with r = 2 rho sin(t)
  const double I = integrate_composite(
      [&](double t) {
        return std::pow(std::sin(t), d - 3.0) * std::pow(std::cos(t), 2.0 * d - 5.0);
      },
      0.0, 0.5 * kPi, 32, 16);
  return sphere_area(d) * C * C * std::pow(2.0 * rho, 3.0 * d - 8.0) * I;
}

ShellHistogram sphere_pair_histogram(int d, double rho, std::span<const double> edges,
                                     std::size_t samples, std::uint64_t seed) {
  if (edges.size() < 2) throw std::invalid_argument("sphere_pair_histogram: need >= 2 edges");
  Rng rng(seed);
  std::vector<double> x(d), y(d);
  std::vector<std::size_t> counts(edges.size() - 1, 0);
  for (std::size_t s = 0; s < samples; ++s) {
    uniform_on_sphere(rng, rho, x);
    uniform_on_sphere(rng, rho, y);
    double r2 = 0.0;
    for (int j = 0; j < d; ++j) r2 += (x[j] + y[j]) * (x[j] + y[j]);
    const double r = std::sqrt(r2);
    auto it = std::upper_bound(edges.begin(), edges.end(), r);
    if (it == edges.begin() || it == edges.end()) continue;
    ++counts[static_cast<std::size_t>(it - edges.begin()) - 1];
  }
  ShellHistogram h;
  h.edges.assign(edges.begin(), edges.end());
  const double n = static_cast<double>(samples);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double vol = ball_volume(d, edges[i + 1]) - ball_volume(d, edges[i]);
    const double p = counts[i] / n;
    h.density.push_back(p / vol);
    h.se.push_back(std::sqrt(p * (1.0 - p) / n) / vol);
  }
  return h;
}

double sphere_ball_hit_probability(int d, double rho, double c_norm, double R) {
  if (d < 2) throw std::invalid_argument("sphere_ball_hit_probability: d >= 2 required");
  if (!(c_norm > 0.0)) return R > rho ? 1.0 : 0.0;
  // |c + x|^2 < R^2  <=>  (x / rho) . c_hat < t; that coordinate has density ~ (1 - t^2)^{(d-3)/2}
  const double t = (R * R - rho * rho - c_norm * c_norm) / (2.0 * rho * c_norm);
  if (t >= 1.0) return 1.0;
  if (t <= -1.0) return 0.0;
  const double a = 0.5 * (d - 1);
  return boost::math::ibeta(a, a, 0.5 * (1.0 + t));
}

ScalarMeasureEstimate conv4_near_zero(int d, std::span<const double> radii, std::size_t samples,
                                      std::uint64_t seed) {
  if (d < 2) throw std::invalid_argument("conv4_near_zero: d >= 2 required");
  if (samples < 2) throw std::invalid_argument("conv4_near_zero: need at least 2 samples");
  Rng rng(seed);
  std::vector<double> p(d), c(d);
  std::vector<std::vector<double>> terms(radii.size(), std::vector<double>(samples));
  for (std::size_t s = 0; s < samples; ++s) {
    std::fill(c.begin(), c.end(), 0.0);
    for (int k = 0; k < 3; ++k) {
      uniform_on_sphere(rng, 1.0, p);
      for (int j = 0; j < d; ++j) c[j] += p[j];
    }
    double s2 = 0.0;
    for (double v : c) s2 += v * v;
    const double sn = std::sqrt(s2);
    for (std::size_t i = 0; i < radii.size(); ++i)
      terms[i][s] = sphere_ball_hit_probability(d, 1.0, sn, radii[i]);
  }
  ScalarMeasureEstimate est;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const SampleSummary sm = summarize(terms[i]);
    const double vol = ball_volume(d, radii[i]);
    est.radii.push_back(radii[i]);
    est.ball_ratios.push_back(sm.mean / vol);
    est.mc_error.push_back(sm.se_mean / vol);
  }
  return est;
}

}  // namespace chaosvar
