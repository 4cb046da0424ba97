#include "chaosvar/berry.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "chaosvar/error.hpp"
#include "chaosvar/measure_estimates.hpp"
#include "chaosvar/quadrature.hpp"
#include "chaosvar/rng.hpp"
#include "chaosvar/stats.hpp"

namespace chaosvar {

namespace {

constexpr double kPi = std::numbers::pi;

// Orthonormal basis of the complement of the unit vector t (d = 2 or 3).
std::vector<Eigen::VectorXd> complement_basis(const Eigen::VectorXd& t) {
  if (t.size() == 2) {
    Eigen::VectorXd e(2);
    e << -t(1), t(0);
    return {e};
  }
  Eigen::Vector3d tt(t(0), t(1), t(2));
  Eigen::Vector3d a = Eigen::Vector3d::Zero();
  int m = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(tt(i)) < std::abs(tt(m))) m = i;
  a(m) = 1.0;
  Eigen::Vector3d e1 = tt.cross(a).normalized();
  Eigen::Vector3d e2 = tt.cross(e1);
  return {Eigen::VectorXd(e1), Eigen::VectorXd(e2)};
}

Eigen::MatrixXcd sym_outer(const Eigen::VectorXd& y, const Eigen::VectorXd& z) {
  Eigen::MatrixXd m = 0.5 * (y * z.transpose() + z * y.transpose());
  return m.cast<cdouble>();
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

void check_inputs(const SphereDensity& psi, const NodalChaosCoeffs& c) {
  if (psi.lift.kind != SphereLift::Kind::None)
    throw ConfigError("berry: pass the base sphere density of Y, not a lifted one");
  if (c.hypothesis != Hypothesis::H1)
    throw ConfigError("berry: restricted fourth chaos is implemented for H1 coefficients");
  const int k = psi.base_target();
  if (c.d != psi.dim_freq || c.f4_restricted.dim() != k * k * psi.dim_freq)
    throw ConfigError("berry: coefficients do not match the density dimensions");
}

}  // namespace

Eigen::MatrixXcd restricted_psi(const SphereDensity& psi, const Eigen::VectorXd& x,
                                const Eigen::VectorXd& theta, int circle_nodes, double phase) {
  const int d = psi.dim_freq;
  if (d != 2 && d != 3) throw ConfigError("restricted_psi: d must be 2 or 3");
  const int k = psi.base_target();
  const double rho = psi.radius;
  const double r = x.norm();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(k * k * d, k * k * d);
  if (r >= 2.0 * rho) return out;
  const Eigen::VectorXd t = r > 0.0 ? Eigen::VectorXd(x / r) : Eigen::VectorXd(theta.normalized());
  const double h = 0.5 * r;
  const double rx = std::sqrt(rho * rho - h * h);
  const auto basis = complement_basis(t);

  std::vector<Eigen::VectorXd> es;
  if (d == 2) {
    es = {basis[0], Eigen::VectorXd(-basis[0])};
  } else {
    for (int j = 0; j < circle_nodes; ++j) {
      const double a = phase + 2.0 * kPi * j / circle_nodes;
      es.push_back(std::cos(a) * basis[0] + std::sin(a) * basis[1]);
    }
  }
  for (const auto& e : es) {
    const Eigen::VectorXd y = h * t + rx * e;
    const Eigen::VectorXd z = y - x;
    const Eigen::MatrixXcd sy = psi.form_at(y / rho).matrix();
    const Eigen::MatrixXcd sz = psi.form_at(z / rho).matrix();
    out += kron(sy, kron(sz, sym_outer(y, z)));
  }
  out *= 4.0 * kPi * kPi / static_cast<double>(es.size());
  return 0.5 * (out + out.adjoint());
}

double restricted_integrand(const SphereDensity& psi, const NodalChaosCoeffs& c, const Eigen::VectorXd& x,
                            const Eigen::VectorXd& theta, int circle_nodes, double phase) {
  check_inputs(psi, c);
  const Eigen::MatrixXcd f = c.f4_restricted.to_matrix().cast<cdouble>();
  const Eigen::MatrixXcd p = restricted_psi(psi, x, theta, circle_nodes, phase);
  const Eigen::MatrixXcd fp = f * p;
  return (fp * fp).trace().real();
}

BerryRate berry_fourth_chaos_rate(int d, const SphereDensity& psi, const NodalChaosCoeffs& coeffs,
                                  const BerrySpec& spec) {
  if (d != 2 && d != 3) throw ConfigError("berry_fourth_chaos_rate: d must be 2 or 3");
  if (psi.dim_freq != d) throw ConfigError("berry_fourth_chaos_rate: dimension mismatch");
  check_inputs(psi, coeffs);
  if (!is_symmetric(SpectralMeasure(psi)))
    throw ConfigError("berry_fourth_chaos_rate: the sphere density must be symmetric");
  if (spec.samples < 2) throw ConfigError("berry_fourth_chaos_rate: need at least 2 samples");

  BerryRate out;
  const double rho = psi.radius;
  const Eigen::VectorXd origin = Eigen::VectorXd::Zero(d);

  // positivity certificate on the theta grid
  const SphereRule dirs = sphere_rule(d, spec.theta_nodes);
  double mean = 0.0;
  out.certificate_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < dirs.directions.size(); ++i) {
    const double v = restricted_integrand(psi, coeffs, origin, dirs.directions[i], spec.circle_nodes);
    out.theta.push_back(dirs.directions[i]);
    out.theta_integrand.push_back(v);
    out.certificate_min = std::min(out.certificate_min, v);
    mean += dirs.weights[i] * v;
  }
  out.theta_mean = mean;
  out.certificate_ok = out.certificate_min > 0.0;

  Rng rng(spec.seed);
  std::vector<double> p(d);
  auto draw = [&](Eigen::VectorXd& v) {
    uniform_on_sphere(rng, rho, p);
    for (int j = 0; j < d; ++j) v(j) = p[j];
  };

  if (d == 2) {
    out.regime = BerryRegime::Log;
    const std::size_t nr = spec.radii.size();
    if (nr == 0) throw ConfigError("berry_fourth_chaos_rate: no radii");
    std::vector<std::vector<double>> terms(nr, std::vector<double>(spec.samples));
    Eigen::VectorXd y1(d), y2(d), y3(d);
    for (std::size_t s = 0; s < spec.samples; ++s) {
      draw(y1);
      draw(y2);
      draw(y3);
      const Eigen::VectorXd sum = y1 + y2;
      const double w = restricted_integrand(psi, coeffs, sum, y1, spec.circle_nodes);
      const double cn = (sum + y3).norm();
      for (std::size_t i = 0; i < nr; ++i)
        terms[i][s] = w * sphere_ball_hit_probability(d, rho, cn, spec.radii[i] * rho);
    }
    // rate: least-squares slope of the ball ratio in log(1/R), which drops the
    // constant term that ratio / |log R| still carries at these radii
    std::vector<double> lx(nr);
    double mx = 0.0;
    for (std::size_t i = 0; i < nr; ++i) {
      lx[i] = std::log(1.0 / spec.radii[i]);
      mx += lx[i] / nr;
    }
    double sxx = 0.0;
    for (double v : lx) sxx += (v - mx) * (v - mx);
    std::vector<double> slope_terms(spec.samples, 0.0);
    for (std::size_t i = 0; i < nr; ++i) {
      const double vol = ball_volume(d, spec.radii[i]);
      const double c = sxx > 0.0 ? (lx[i] - mx) / (sxx * vol) : 1.0 / (lx[i] * vol * nr);
      for (std::size_t s = 0; s < spec.samples; ++s) slope_terms[s] += c * terms[i][s];
      const auto sm = summarize(terms[i]);
      out.radii.push_back(spec.radii[i]);
      out.ball_ratios.push_back(sm.mean / vol);
      out.ball_ratio_se.push_back(sm.se_mean / vol);
      out.ratio_over_log.push_back(sm.mean / vol / lx[i]);
    }
    const auto sl = summarize(slope_terms);
    out.rate = sl.mean;
    out.se = sl.se_mean;
    out.spread = relative_spread(out.ratio_over_log);
  } else {
    out.regime = BerryRegime::Constant;
    const double area = sphere_area(d);
    const double rmax = 2.0 * rho;
    std::vector<double> terms(spec.samples);
    Eigen::VectorXd dir(d);
    for (std::size_t s = 0; s < spec.samples; ++s) {
      uniform_on_sphere(rng, 1.0, p);
      for (int j = 0; j < d; ++j) dir(j) = p[j];
      const double r = rmax * uniform01(rng);
      const double phase = 2.0 * kPi * uniform01(rng);
      const double dens = sphere_conv_density_radial(d, rho, r);
      const double t = restricted_integrand(psi, coeffs, r * dir, dir, spec.circle_nodes, phase);
      terms[s] = rmax * area * std::pow(r, d - 1) * dens * dens * t;
    }
    const auto sm = summarize(terms);
    out.rate = sm.mean;
    out.se = sm.se_mean;

    const SphereRule qd = sphere_rule(d, spec.theta_nodes);
    auto radial = [&](double r) {
      double acc = 0.0;
      for (std::size_t i = 0; i < qd.directions.size(); ++i)
        acc += qd.weights[i] *
               restricted_integrand(psi, coeffs, r * qd.directions[i], qd.directions[i], spec.circle_nodes);
      const double dens = sphere_conv_density_radial(d, rho, r);
      return area * std::pow(r, d - 1) * dens * dens * acc;
    };
    out.quadrature = integrate_composite(radial, 0.0, rmax, 16, 16);
  }
  // Var(Z^(4)) carries 1 / 4!
  out.rate /= 24.0;
  out.se /= 24.0;
  out.quadrature /= 24.0;
  if (out.se > spec.max_relative_se * std::abs(out.rate))
    throw NumericalError("berry_fourth_chaos_rate: MC relative SE above threshold");
  return out;
}

}  // namespace chaosvar
