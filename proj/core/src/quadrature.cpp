#include "chaosvar/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "chaosvar/stats.hpp"

namespace chaosvar {

QuadRule1D gauss_legendre(int m, double a, double b) {
  if (m < 1) throw std::invalid_argument("gauss_legendre: m >= 1");
  static std::mutex mu;
  static std::map<int, QuadRule1D> cache;
  QuadRule1D base;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(m);
    if (it != cache.end()) base = it->second;
  }
  if (base.nodes.empty()) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
    for (int k = 1; k < m; ++k) {
      const double kk = k;
      J(k, k - 1) = J(k - 1, k) = kk / std::sqrt(4.0 * kk * kk - 1.0);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    base.nodes.resize(m);
    base.weights.resize(m);
    for (int i = 0; i < m; ++i) {
      base.nodes[i] = es.eigenvalues()(i);
      base.weights[i] = 2.0 * es.eigenvectors()(0, i) * es.eigenvectors()(0, i);
    }
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(m, base);
  }
  QuadRule1D r = base;
  const double h = 0.5 * (b - a), c = 0.5 * (a + b);
  for (int i = 0; i < m; ++i) {
    r.nodes[i] = c + h * r.nodes[i];
    r.weights[i] *= h;
  }
  return r;
}

double integrate_composite(const std::function<double(double)>& f, double a, double b,
                           int panels, int order) {
  const QuadRule1D ref = gauss_legendre(order);
  const double w = (b - a) / panels;
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(panels) * order);
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * w;
    for (int i = 0; i < order; ++i)
      terms.push_back(0.5 * w * ref.weights[i] * f(lo + 0.5 * w * (ref.nodes[i] + 1.0)));
  }
  return pairwise_sum(terms);
}

SphereRule sphere_rule(int d, int n) {
  SphereRule r;
  if (d == 1) {
    r.directions = {Eigen::VectorXd::Constant(1, -1.0), Eigen::VectorXd::Constant(1, 1.0)};
    r.weights = {0.5, 0.5};
    return r;
  }
  if (d == 2) {
    if (n < 2) throw std::invalid_argument("sphere_rule: n >= 2");
    for (int j = 0; j < n; ++j) {
      const double t = 2.0 * std::numbers::pi * (j + 0.5) / n;
      Eigen::VectorXd v(2);
      v << std::cos(t), std::sin(t);
      r.directions.push_back(v);
      r.weights.push_back(1.0 / n);
    }
    return r;
  }
  if (d == 3) {
    const int nt = std::max(4, static_cast<int>(std::sqrt(n / 2.0)));
    const int np = 2 * nt;
    const QuadRule1D gl = gauss_legendre(nt);
    for (int i = 0; i < nt; ++i) {
      const double z = gl.nodes[i];
      const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
      for (int j = 0; j < np; ++j) {
        const double p = 2.0 * std::numbers::pi * (j + 0.5) / np;
        Eigen::VectorXd v(3);
        v << s * std::cos(p), s * std::sin(p), z;
        r.directions.push_back(v);
        r.weights.push_back(0.5 * gl.weights[i] / np);
      }
    }
    return r;
  }
  throw std::invalid_argument("sphere_rule: d must be 1, 2 or 3");
}

}  // namespace chaosvar
