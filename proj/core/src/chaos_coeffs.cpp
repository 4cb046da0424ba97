#include "chaosvar/chaos_coeffs.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <vector>

#include "chaosvar/error.hpp"
#include "chaosvar/field.hpp"
#include "chaosvar/rng.hpp"
#include "chaosvar/stats.hpp"

namespace chaosvar {

namespace {

constexpr double kPi = std::numbers::pi;

int sym_dim(int d) { return d * (d + 1) / 2; }

double gaussian_density(const Eigen::VectorXd& u) {
  const double k = static_cast<double>(u.size());
  return std::pow(2.0 * kPi, -0.5 * k) * std::exp(-0.5 * u.squaredNorm());
}

}  // namespace

std::string hypothesis_name(Hypothesis h) {
  switch (h) {
    case Hypothesis::H1: return "H1";
    case Hypothesis::H2: return "H2";
    case Hypothesis::H3: return "H3";
  }
  return "H1";
}

Hypothesis hypothesis_from_name(const std::string& s) {
  if (s == "H1") return Hypothesis::H1;
  if (s == "H2") return Hypothesis::H2;
  if (s == "H3") return Hypothesis::H3;
  throw ConfigError("unknown hypothesis '" + s + "'");
}

std::pair<double, double> expected_jacobian_mc(int d, int k, const McSpec& mc) {
  if (k < 1 || k > d) throw ConfigError("expected_jacobian_mc: need 1 <= k <= d");
  Rng rng(mc.seed);
  std::vector<double> js(mc.samples);
  Eigen::MatrixXd D(k, d);
  for (std::size_t s = 0; s < mc.samples; ++s) {
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < d; ++j) D(i, j) = standard_normal(rng);
    const double g = (D * D.transpose()).determinant();
    js[s] = std::sqrt(std::max(g, 0.0));
  }
  const auto sum = summarize(js);
  return {sum.mean, sum.se_mean};
}

AlphaEstimate alpha_constant(int d, int k, const Eigen::VectorXd& u, const McSpec& mc) {
  if (k < 1 || k > d) throw ConfigError("alpha_constant: need 1 <= k <= d");
  if (u.size() != k) throw ConfigError("alpha_constant: level has wrong dimension");
  AlphaEstimate out;
  const double rho = gaussian_density(u);
  if (k == 1) {
    out.expected_jacobian = std::sqrt(2.0) * std::exp(std::lgamma(0.5 * (d + 1)) - std::lgamma(0.5 * d));
    out.closed_form = true;
  } else {
    auto [m, se] = expected_jacobian_mc(d, k, mc);
    if (se > mc.max_relative_se * m)
      throw NumericalError("alpha_constant: MC relative SE above threshold");
    out.expected_jacobian = m;
    out.se = rho * se;
  }
  out.alpha = rho * out.expected_jacobian;
  return out;
}

double beta0(int d) { return static_cast<double>(d) / (d + 2); }

double gamma_constant(int d, int sign) {
  return 1.0 + (sign < 0 ? -1.0 : 1.0) * std::sqrt(2.0 / (d + 2));
}

double gamma_quadratic_residual(int d, double gamma) {
  const double c = static_cast<double>(d + 2) / d;
  return c * gamma * gamma - 2.0 * c * gamma + 1.0;
}

IsotropicHessianConstants hessian_constants(int d, const SpectralMeasure& psi, int gamma_sign,
                                            const std::optional<McSpec>& mc) {
  if (d < 2) throw ConfigError("hessian_constants: need d >= 2");
  if (dim_freq(psi) != d) throw ConfigError("hessian_constants: dimension mismatch");
  if (dim_target(psi) != 1) throw ConfigError("hessian_constants: scalar measure required");

  const auto atoms = quadrature_atoms(psi);
  std::vector<double> w0, w2(d), w4(d), w22;
  std::vector<std::vector<double>> second(d), fourth(d);
  std::vector<double> mixed;
  for (const auto& a : atoms) {
    const double w = a.form(0, 0).real();
    w0.push_back(w);
    for (int i = 0; i < d; ++i) {
      const double x2 = a.freq(i) * a.freq(i);
      second[i].push_back(w * x2);
      fourth[i].push_back(w * x2 * x2);
    }
    mixed.push_back(w * a.freq(0) * a.freq(0) * a.freq(1) * a.freq(1));
  }
  const double m0 = pairwise_sum(w0);
  std::vector<double> s2(d), s4(d);
  for (int i = 0; i < d; ++i) {
    s2[i] = pairwise_sum(second[i]);
    s4[i] = pairwise_sum(fourth[i]);
  }
  const double s1122 = pairwise_sum(mixed);
  if (!(m0 > 0.0) || !(s2[0] > 0.0)) throw NumericalError("hessian_constants: degenerate measure");

  constexpr double tol = 1e-3;
  for (int i = 1; i < d; ++i) {
    if (std::abs(s2[i] - s2[0]) > tol * s2[0] || std::abs(s4[i] - s4[0]) > tol * s4[0])
      throw NumericalError("hessian_constants: measure is not isotropic (axis moments differ)");
  }
  if (std::abs(s4[0] - 3.0 * s1122) > tol * s4[0])
    throw NumericalError("hessian_constants: measure is not isotropic (fourth moments off pattern)");

  IsotropicHessianConstants out;
  out.d = d;
  out.beta = s1122 * m0 / (s2[0] * s2[0]);
  out.beta0 = beta0(d);
  out.gamma_sign = gamma_sign < 0 ? -1 : 1;
  out.gamma = gamma_constant(d, out.gamma_sign);

  if (mc) {
    DiscretizationSpec spec;
    if (std::holds_alternative<SphereDensity>(psi)) {
      spec.strategy = DiscretizationSpec::Strategy::SphereEquiangular;
      spec.n_atoms = d == 2 ? 64 : 512;
    } else if (std::holds_alternative<LebesgueDensity>(psi)) {
      spec.strategy = DiscretizationSpec::Strategy::GridQuadrature;
    }
    auto model = std::make_shared<const FieldModel>(discretize(psi, spec), "hessian-mc");
    const std::size_t n = mc->samples;
    std::vector<double> xs(n), ys(n), zs(n);
    const Eigen::VectorXd origin = Eigen::VectorXd::Zero(d);
    for (std::size_t s = 0; s < n; ++s) {
      FieldRealization real(model, child_seed(mc->seed, s));
      const double f = real.value(origin)(0);
      const Eigen::MatrixXd g = real.gradient(origin);
      const Eigen::MatrixXd h = real.hessian(origin);
      xs[s] = h(0, 1) * h(0, 1);
      ys[s] = f * f;
      zs[s] = g.row(0).squaredNorm() / d;
    }
    const double xm = pairwise_sum(xs) / n, ym = pairwise_sum(ys) / n, zm = pairwise_sum(zs) / n;
    std::vector<double> infl(n);
    for (std::size_t s = 0; s < n; ++s) infl[s] = xs[s] / xm + ys[s] / ym - 2.0 * zs[s] / zm;
    out.beta_mc = xm * ym / (zm * zm);
    out.beta_se = out.beta_mc * std::sqrt(summarize(infl).variance / n);
  }
  return out;
}

H3Constants h3_constants_mc(int d, double beta, double gamma, const McSpec& mc) {
  if (d < 2) throw ConfigError("h3_constants_mc: need d >= 2");
  if (!(beta > 0.0) || std::abs(1.0 - gamma) < 1e-12)
    throw ConfigError("h3_constants_mc: need beta > 0 and gamma != 1");
  const int ns = sym_dim(d);
  const double rho0 = std::pow(2.0 * kPi, -0.5 * d);
  const double scale = std::sqrt(2.0 * beta);
  const double shift = gamma / (d * (1.0 - gamma));
  Rng rng(mc.seed);
  const std::size_t n = mc.samples;
  std::vector<double> js(n), as(n), bs(n), gaps(n);
  Eigen::VectorXd z(ns);
  for (std::size_t s = 0; s < n; ++s) {
    for (int i = 0; i < ns; ++i) z(i) = standard_normal(rng);
    Eigen::MatrixXd tf = sym_from_coords(z, d);
    Eigen::MatrixXd h = scale * (tf + shift * tf.trace() * Eigen::MatrixXd::Identity(d, d));
    const double j = std::abs(h.determinant());
    double off = 0.0;
    for (int i = d; i < ns; ++i) off += z(i) * z(i) - 1.0;
    off /= (ns - d);
    double cross = 0.0;
    int pairs = 0;
    for (int a = 0; a < d; ++a)
      for (int b = a + 1; b < d; ++b, ++pairs) cross += z(a) * z(b);
    cross /= pairs;
    js[s] = rho0 * j;
    as[s] = rho0 * j * off;
    bs[s] = rho0 * j * cross;
    gaps[s] = js[s] - 0.5 * (d + 1) * as[s] - bs[s];
  }
  H3Constants out;
  auto sj = summarize(js), sa = summarize(as), sb = summarize(bs);
  out.alpha = sj.mean;
  out.alpha_se = sj.se_mean;
  out.A = sa.mean;
  out.A_se = sa.se_mean;
  out.B = out.alpha - 0.5 * (d + 1) * out.A;
  out.B_mc = sb.mean;
  out.B_se = sb.se_mean;
  out.B_gap_se = summarize(gaps).se_mean;
  if (sj.se_mean > mc.max_relative_se * std::abs(sj.mean))
    throw NumericalError("h3_constants_mc: MC relative SE above threshold");
  return out;
}

double h3_constraint_residual(int d, double A, double B, double gamma, double alpha) {
  const double dd = d;
  return A * (1.0 - 2.0 * gamma / dd + gamma * gamma / dd) + B * (1.0 - gamma) * (1.0 - gamma) -
         2.0 * beta0(d) * alpha / dd;
}

NodalChaosCoeffs chaos_coeffs(Hypothesis hyp, int d, int k, const Eigen::VectorXd& u,
                              const ChaosExtras& extras) {
  if (d < 1) throw ConfigError("chaos_coeffs: need d >= 1");
  NodalChaosCoeffs c;
  c.hypothesis = hyp;
  c.d = d;
  c.k = k;
  c.u = u;

  if (hyp == Hypothesis::H1 || hyp == Hypothesis::H2) {
    if (hyp == Hypothesis::H2 && k != 1)
      throw ConfigError("chaos_coeffs: H2 covers the first (scalar) block only, use k = 1");
    const AlphaEstimate al = alpha_constant(d, k, u, extras.mc);
    c.alpha_u = extras.alpha.value_or(al.alpha);
    const double a = c.alpha_u;
    const int m = k * (1 + d);

    Eigen::MatrixXd grad_block = Eigen::MatrixXd::Identity(d, d) / d;
    if (hyp == Hypothesis::H2) {
      if (extras.M.rows() != d || extras.M.cols() != d)
        throw ConfigError("chaos_coeffs: H2 needs a d x d matrix M");
      if (std::abs(extras.M.trace() - 1.0) > 1e-8)
        throw ConfigError("chaos_coeffs: H2 matrix M must have unit trace");
      if ((extras.M - extras.M.transpose()).cwiseAbs().maxCoeff() > 1e-12)
        throw ConfigError("chaos_coeffs: H2 matrix M must be symmetric");
      grad_block = extras.M;
      c.M = extras.M;
    }

    c.f1 = SymTensor(1, m);
    for (int i = 0; i < k; ++i) c.f1.set({i * (1 + d)}, a * u(i));

    Eigen::MatrixXd f2 = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < k; ++i) {
      const int bi = i * (1 + d);
      f2(bi, bi) += -1.0;
      f2.block(bi + 1, bi + 1, d, d) += grad_block;
      for (int j = 0; j < k; ++j) f2(bi, j * (1 + d)) += u(i) * u(j);
    }
    c.f2 = SymTensor::from_matrix(a * f2);

    const int r = k * k * d;
    c.f4_restricted = SymTensor::from_matrix(-(a / d) * Eigen::MatrixXd::Identity(r, r));
    return c;
  }

  // H3: critical points of a scalar F, coordinates (grad F, TF).
  if (!extras.isotropic)
    throw ConfigError("chaos_coeffs: H3 without isotropy has no closed form; supply S(xi) explicitly");
  if (d < 2) throw ConfigError("chaos_coeffs: H3 needs d >= 2");
  if (u.size() != 0 && u.norm() != 0.0) throw ConfigError("chaos_coeffs: H3 is defined at level 0");
  if (!(extras.beta > 0.0)) throw ConfigError("chaos_coeffs: H3 needs beta > 0");
  c.beta = extras.beta;
  c.gamma = extras.gamma != 0.0 ? extras.gamma : gamma_constant(d, -1);
  c.k = d;
  c.u = Eigen::VectorXd::Zero(d);

  double alpha = 0.0, A = 0.0, B = 0.0;
  if (extras.alpha && extras.A) {
    alpha = *extras.alpha;
    A = *extras.A;
  } else {
    const H3Constants mc = h3_constants_mc(d, c.beta, c.gamma, extras.mc);
    alpha = extras.alpha.value_or(mc.alpha);
    A = extras.A.value_or(mc.A);
  }
  B = extras.B.value_or(alpha - 0.5 * (d + 1) * A);
  c.alpha_u = alpha;
  c.A = A;
  c.B = B;

  const int ns = sym_dim(d);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(ns);
  e.head(d).setOnes();
  const Eigen::MatrixXd tf_block = A * Eigen::MatrixXd::Identity(ns, ns) + B * e * e.transpose();

  c.f1 = SymTensor(1, d + ns);
  Eigen::MatrixXd f2 = Eigen::MatrixXd::Zero(d + ns, d + ns);
  f2.topLeftCorner(d, d) = -alpha * Eigen::MatrixXd::Identity(d, d);
  f2.bottomRightCorner(ns, ns) = tf_block;
  c.f2 = SymTensor::from_matrix(f2);

  Eigen::MatrixXd f4 = Eigen::MatrixXd::Zero(d * ns, d * ns);
  for (int v = 0; v < d; ++v) f4.block(v * ns, v * ns, ns, ns) = tf_block;
  c.f4_restricted = SymTensor::from_matrix(f4);
  return c;
}

}  // namespace chaosvar
