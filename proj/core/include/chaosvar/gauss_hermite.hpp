#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "chaosvar/sym_tensor.hpp"

namespace chaosvar {

using ScalarFunction = std::function<double(std::span<const double>)>;

// Probabilists' Hermite polynomials He_0..He_kmax at x.
std::vector<double> hermite_polys(double x, int kmax);

// Gauss-Hermite rule for the standard normal: sum_i w_i p(x_i) = E[p(N)]
// exactly for deg p <= 2m - 1. Weights sum to 1.
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussHermiteRule gauss_hermite_rule(int m);

// Hermite q-form H_x^q in whitened coordinates: entry at a sorted index is
// prod_j He_{c_j}(x_j), c_j the number of occurrences of j.
SymTensor hermite_form(std::span<const double> x, int q);

// Gaussian measure on R^n with covariance C = L L^T. Whitened coordinates
// z = L^{-1} x make the measure standard.
class GaussianSpace {
 public:
  explicit GaussianSpace(int n);  // already standard
  explicit GaussianSpace(const Eigen::MatrixXd& covariance);

  int dim() const { return static_cast<int>(chol_.rows()); }
  Eigen::VectorXd whiten(const Eigen::VectorXd& x) const;
  Eigen::VectorXd unwhiten(const Eigen::VectorXd& z) const;
  // f expressed in whitened coordinates.
  ScalarFunction pull_back(ScalarFunction f_ambient) const;

 private:
  Eigen::MatrixXd chol_;
};

struct ProjectionScheme {
  enum class Kind { Quadrature, MonteCarlo };
  Kind kind = Kind::Quadrature;
  int nodes_per_axis = 0;       // 0 selects 2*q_max + 4
  std::size_t samples = 200000; // MC only, rounded up to an even count
  std::uint64_t seed = 1;
  double max_relative_se = 0.05;

  static ProjectionScheme automatic(int n, int q_max);
};

struct ChaosExpansion {
  std::vector<SymTensor> coeffs;  // f_0 .. f_qmax
  int nodes_per_axis = 0;         // quadrature: exact for degree 2m-1 integrands
  double max_relative_se = 0.0;   // MC: worst coefficient SE relative to the largest coefficient
};

// f_q = int f(x) H_x^q d eta(x) for q = 0..q_max, f in whitened coordinates.
// Quadrature requires n <= 4 and q_max <= 8. Throws NumericalError when the MC
// relative SE exceeds the scheme threshold.
ChaosExpansion chaos_expand(const ScalarFunction& f, int n, int q_max,
                            const ProjectionScheme& scheme);
SymTensor chaos_project(const ScalarFunction& f, int n, int q, const ProjectionScheme& scheme);

struct SeriesResult {
  double value = 0.0;
  double last_term = 0.0;
  bool converged = true;  // false when |last term| > threshold * |partial sum|
};

// Cov(f(X), g(X')) = sum_{1 <= q <= q_max} Omega^{(x)q}(f_q, g_q) / q! for
// standard X, X' with cross-covariance omega (||omega||_op <= 1). The q = 0
// entries are ignored: the mean does not enter the covariance.
SeriesResult covariance_series(std::span<const SymTensor> f_list,
                               std::span<const SymTensor> g_list,
                               const Eigen::MatrixXd& omega, int q_max,
                               double warn_fraction = 1e-3);

// sum_q <f_q, H_x^q> / q!.
double hermite_eval_series(std::span<const SymTensor> f_list, std::span<const double> x);

}  // namespace chaosvar
