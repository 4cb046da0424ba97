#include "chaosvar/gauss_hermite.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include <boost/math/distributions/normal.hpp>

#include "chaosvar/error.hpp"
#include "chaosvar/rng.hpp"
#include "chaosvar/stats.hpp"

namespace chaosvar {

namespace {
double factorial(int k) {
  double r = 1.0;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}
}  // namespace

std::vector<double> hermite_polys(double x, int kmax) {
  std::vector<double> he(std::max(kmax, 0) + 1);
  he[0] = 1.0;
  if (kmax >= 1) he[1] = x;
  for (int k = 1; k < kmax; ++k) he[k + 1] = x * he[k] - k * he[k - 1];
  return he;
}

GaussHermiteRule gauss_hermite_rule(int m) {
  if (m < 1) throw std::invalid_argument("gauss_hermite_rule: m >= 1");
  static std::mutex mu;
  static std::map<int, GaussHermiteRule> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
  }
  // Golub-Welsch on the Jacobi matrix of He_k: off-diagonal sqrt(k).
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
  for (int k = 1; k < m; ++k) J(k, k - 1) = J(k - 1, k) = std::sqrt(static_cast<double>(k));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  GaussHermiteRule rule;
  rule.nodes.resize(m);
  rule.weights.resize(m);
  for (int i = 0; i < m; ++i) {
    rule.nodes[i] = es.eigenvalues()(i);
    rule.weights[i] = es.eigenvectors()(0, i) * es.eigenvectors()(0, i);
  }
  // Symmetrize against round-off: the rule is exactly symmetric about 0.
  for (int i = 0; i < m / 2; ++i) {
    const double x = 0.5 * (rule.nodes[m - 1 - i] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[i] + rule.weights[m - 1 - i]);
    rule.nodes[i] = -x;
    rule.nodes[m - 1 - i] = x;
    rule.weights[i] = rule.weights[m - 1 - i] = w;
  }
  if (m % 2 == 1) rule.nodes[m / 2] = 0.0;
  const double wsum = pairwise_sum(rule.weights);
  for (double& w : rule.weights) w /= wsum;
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(m, rule);
  return rule;
}

SymTensor hermite_form(std::span<const double> x, int q) {
  const int n = static_cast<int>(x.size());
  std::vector<std::vector<double>> he(n);
  for (int j = 0; j < n; ++j) he[j] = hermite_polys(x[j], q);
  SymTensor t(q, n);
  std::vector<int> counts(n);
  for_each_sorted_index(n, q, [&](const MultiIndex& idx) {
    std::fill(counts.begin(), counts.end(), 0);
    for (int i : idx) ++counts[i];
    double v = 1.0;
    for (int j = 0; j < n; ++j) v *= he[j][counts[j]];
    t.set(idx, v);
  });
  return t;
}

GaussianSpace::GaussianSpace(int n) : chol_(Eigen::MatrixXd::Identity(n, n)) {}

GaussianSpace::GaussianSpace(const Eigen::MatrixXd& covariance) {
  Eigen::LLT<Eigen::MatrixXd> llt(covariance);
  if (llt.info() != Eigen::Success)
    throw NumericalError("GaussianSpace: covariance is not positive definite");
  chol_ = llt.matrixL();
}

Eigen::VectorXd GaussianSpace::whiten(const Eigen::VectorXd& x) const {
  return chol_.triangularView<Eigen::Lower>().solve(x);
}

Eigen::VectorXd GaussianSpace::unwhiten(const Eigen::VectorXd& z) const { return chol_ * z; }

ScalarFunction GaussianSpace::pull_back(ScalarFunction f_ambient) const {
  Eigen::MatrixXd L = chol_;
  return [L, f = std::move(f_ambient)](std::span<const double> z) {
    Eigen::Map<const Eigen::VectorXd> zv(z.data(), static_cast<Eigen::Index>(z.size()));
    Eigen::VectorXd x = L * zv;
    return f(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
  };
}

ProjectionScheme ProjectionScheme::automatic(int n, int q_max) {
  ProjectionScheme s;
  s.kind = (n <= 4 && q_max <= 8) ? Kind::Quadrature : Kind::MonteCarlo;
  return s;
}

namespace {

// Accumulates f(x) * H_x^q[I] for every q <= q_max and sorted index I.
struct Accumulator {
  int n;
  int q_max;
  std::vector<std::vector<MultiIndex>> indices;  // per order

  Accumulator(int n_, int q_max_) : n(n_), q_max(q_max_), indices(q_max_ + 1) {
    for (int q = 0; q <= q_max; ++q)
      for_each_sorted_index(n, q, [&](const MultiIndex& idx) { indices[q].push_back(idx); });
  }

  // Flat vector of H_x^q[I] over all orders and indices.
  void hermite_values(std::span<const double> x, std::vector<double>& out) const {
    std::vector<std::vector<double>> he(n);
    for (int j = 0; j < n; ++j) he[j] = hermite_polys(x[j], q_max);
    out.clear();
    std::vector<int> counts(n);
    for (int q = 0; q <= q_max; ++q) {
      for (const auto& idx : indices[q]) {
        std::fill(counts.begin(), counts.end(), 0);
        for (int i : idx) ++counts[i];
        double v = 1.0;
        for (int j = 0; j < n; ++j) v *= he[j][counts[j]];
        out.push_back(v);
      }
    }
  }

  std::size_t size() const {
    std::size_t s = 0;
    for (const auto& v : indices) s += v.size();
    return s;
  }

  std::vector<SymTensor> unpack(const std::vector<double>& flat) const {
    std::vector<SymTensor> res;
    std::size_t k = 0;
    for (int q = 0; q <= q_max; ++q) {
      SymTensor t(q, n);
      for (const auto& idx : indices[q]) {
        if (flat[k] != 0.0) t.set(idx, flat[k]);
        ++k;
      }
      res.push_back(std::move(t));
    }
    return res;
  }
};

}  // namespace

ChaosExpansion chaos_expand(const ScalarFunction& f, int n, int q_max,
                            const ProjectionScheme& scheme) {
  if (n < 1 || q_max < 0) throw std::invalid_argument("chaos_expand: bad n or q_max");
  Accumulator acc(n, q_max);
  const std::size_t nc = acc.size();
  ChaosExpansion out;
  std::vector<double> hv;
  std::vector<double> x(n);

  if (scheme.kind == ProjectionScheme::Kind::Quadrature) {
    if (n > 4 || q_max > 8)
      throw std::invalid_argument("chaos_expand: quadrature needs n <= 4 and q <= 8");
    const int m = scheme.nodes_per_axis > 0 ? scheme.nodes_per_axis : 2 * q_max + 4;
    const GaussHermiteRule rule = gauss_hermite_rule(m);
    std::size_t total = 1;
    for (int j = 0; j < n; ++j) total *= m;
    std::vector<std::vector<double>> terms(nc, std::vector<double>(total));
    std::vector<int> pos(n, 0);
    for (std::size_t t = 0; t < total; ++t) {
      std::size_t r = t;
      double w = 1.0;
      for (int j = n - 1; j >= 0; --j) {
        pos[j] = static_cast<int>(r % m);
        r /= m;
        x[j] = rule.nodes[pos[j]];
        w *= rule.weights[pos[j]];
      }
      const double fx = f(x);
      acc.hermite_values(x, hv);
      for (std::size_t c = 0; c < nc; ++c) terms[c][t] = w * fx * hv[c];
    }
    std::vector<double> flat(nc);
    for (std::size_t c = 0; c < nc; ++c) flat[c] = pairwise_sum(terms[c]);
    out.coeffs = acc.unpack(flat);
    out.nodes_per_axis = m;
    return out;
  }

  // Monte Carlo: antithetic pairs (z, -z), first coordinate stratified.
  const std::size_t pairs = std::max<std::size_t>(2, (scheme.samples + 1) / 2);
  Rng rng(scheme.seed);
  const boost::math::normal_distribution<double> nd;
  std::vector<std::vector<double>> terms(nc, std::vector<double>(pairs));
  std::vector<double> hv2, xm(n);
  for (std::size_t p = 0; p < pairs; ++p) {
    const double u = (static_cast<double>(p) + uniform01(rng)) / static_cast<double>(pairs);
    x[0] = boost::math::quantile(nd, u);
    for (int j = 1; j < n; ++j) x[j] = standard_normal(rng);
    for (int j = 0; j < n; ++j) xm[j] = -x[j];
    const double f1 = f(x), f2 = f(xm);
    acc.hermite_values(x, hv);
    acc.hermite_values(xm, hv2);
    for (std::size_t c = 0; c < nc; ++c) terms[c][p] = 0.5 * (f1 * hv[c] + f2 * hv2[c]);
  }
  std::vector<double> flat(nc), se(nc);
  for (std::size_t c = 0; c < nc; ++c) {
    const SampleSummary s = summarize(terms[c]);
    flat[c] = s.mean;
    se[c] = s.se_mean;
  }
  double scale = 0.0, worst = 0.0;
  for (std::size_t c = 0; c < nc; ++c) scale = std::max(scale, std::abs(flat[c]));
  for (std::size_t c = 0; c < nc; ++c) worst = std::max(worst, se[c]);
  out.max_relative_se = scale > 0.0 ? worst / scale : (worst > 0.0 ? INFINITY : 0.0);
  if (out.max_relative_se > scheme.max_relative_se)
    throw NumericalError("chaos_expand: Monte Carlo relative standard error " +
                         std::to_string(out.max_relative_se) + " above threshold");
  out.coeffs = acc.unpack(flat);
  return out;
}

SymTensor chaos_project(const ScalarFunction& f, int n, int q, const ProjectionScheme& scheme) {
  ChaosExpansion e = chaos_expand(f, n, q, scheme);
  return e.coeffs.back();
}

SeriesResult covariance_series(std::span<const SymTensor> f_list,
                               std::span<const SymTensor> g_list,
                               const Eigen::MatrixXd& omega, int q_max, double warn_fraction) {
  if (static_cast<int>(f_list.size()) <= q_max || static_cast<int>(g_list.size()) <= q_max)
    throw std::invalid_argument("covariance_series: lists shorter than q_max + 1");
  const double op = omega.jacobiSvd().singularValues()(0);
  if (op > 1.0 + 1e-12)
    throw std::invalid_argument("covariance_series: ||omega||_op > 1 in whitened coordinates");
  std::vector<double> terms{0.0};
  for (int q = 1; q <= q_max; ++q) {
    if (f_list[q].order() != q || g_list[q].order() != q)
      throw std::invalid_argument("covariance_series: list entry q must have order q");
    terms.push_back(tensor_power_pairing(omega, f_list[q], g_list[q]) / factorial(q));
  }
  SeriesResult r;
  r.value = pairwise_sum(terms);
  r.last_term = terms.back();
  r.converged = q_max <= 1 || std::abs(r.last_term) <= warn_fraction * std::abs(r.value);
  return r;
}

double hermite_eval_series(std::span<const SymTensor> f_list, std::span<const double> x) {
  double s = 0.0;
  for (std::size_t q = 0; q < f_list.size(); ++q) {
    if (f_list[q].order() != static_cast<int>(q))
      throw std::invalid_argument("hermite_eval_series: entry q must have order q");
    s += pair(f_list[q], hermite_form(x, static_cast<int>(q))) / factorial(static_cast<int>(q));
  }
  return s;
}

}  // namespace chaosvar
