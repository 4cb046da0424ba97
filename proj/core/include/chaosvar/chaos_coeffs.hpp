#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "chaosvar/spectral_measure.hpp"
#include "chaosvar/sym_tensor.hpp"

namespace chaosvar {

enum class Hypothesis { H1, H2, H3 };
std::string hypothesis_name(Hypothesis h);
Hypothesis hypothesis_from_name(const std::string& s);

struct McSpec {
  std::size_t samples = 200000;
  std::uint64_t seed = 7;
  double max_relative_se = 0.02;
};

struct AlphaEstimate {
  double alpha = 0.0;      // rho(u) E[J]
  double se = 0.0;         // 0 for closed forms
  double expected_jacobian = 0.0;
  bool closed_form = false;
};

// alpha_u = rho(u) E[sqrt(det(D D^T))], D a k x d standard Gaussian matrix,
// rho the standard Gaussian density on R^k. k = 1 uses E|N_d| = sqrt2 Gamma((d+1)/2) / Gamma(d/2).
AlphaEstimate alpha_constant(int d, int k, const Eigen::VectorXd& u, const McSpec& mc = {});

// E[sqrt(det(D D^T))] by plain MC: {mean, se}.
std::pair<double, double> expected_jacobian_mc(int d, int k, const McSpec& mc);

struct IsotropicHessianConstants {
  int d = 2;
  double beta = 0.0;
  double beta_se = 0.0;      // MC cross-check SE (0 if not run)
  double beta_mc = 0.0;      // MC cross-check value
  double beta0 = 0.0;        // d / (d + 2)
  double gamma = 0.0;        // 1 + gamma_sign * sqrt(2 / (d + 2))
  int gamma_sign = -1;
};

double beta0(int d);
double gamma_constant(int d, int sign);
// (d+2)/d gamma^2 - 2(d+2)/d gamma + 1, zero for both gamma signs.
double gamma_quadratic_residual(int d, double gamma);

// beta = E[d1 d2 F(0)^2] after standardizing Var F = Var d_i F = 1, by spectral
// quadrature of the fourth moment; optional MC cross-check over `mc.samples`
// fields sampled from a discretization. Throws NumericalError if the second
// and fourth moments are not isotropic.
IsotropicHessianConstants hessian_constants(int d, const SpectralMeasure& psi, int gamma_sign = -1,
                                            const std::optional<McSpec>& mc = std::nullopt);

// Constants of the isotropic (H3) second chaos: f_2(v, S) = -alpha |v|^2 + A Tr S^2 + B (Tr S)^2.
struct H3Constants {
  double alpha = 0.0, alpha_se = 0.0;
  double A = 0.0, A_se = 0.0;
  double B = 0.0;           // alpha - (d + 1) A / 2
  double B_mc = 0.0, B_se = 0.0;  // independent MC estimate of B, for checking
  double B_gap_se = 0.0;          // SE of B - B_mc (same samples)
};
// MC over Hess F = sqrt(2 beta) [TF + gamma / (d (1 - gamma)) Tr(TF) I], TF standard on Sym(V).
H3Constants h3_constants_mc(int d, double beta, double gamma, const McSpec& mc = {});

// A(1 - 2 gamma / d + gamma^2 / d) + B (1 - gamma)^2 - 2 beta0 alpha / d
double h3_constraint_residual(int d, double A, double B, double gamma, double alpha);

struct ChaosExtras {
  Eigen::MatrixXd M;                // H2: first-block gradient matrix, unit trace
  double beta = 0.0, gamma = 0.0;   // H3
  std::optional<double> A, B;       // H3: supplied or estimated
  std::optional<double> alpha;      // overrides the computed alpha (H3)
  bool isotropic = true;            // H3
  McSpec mc;
};

// Coordinates: H1 target index i * (1 + d) + j for U (x) (R x V); H2 the first
// block (Y_1, grad Y_1); H3 (grad F, TF) with TF in orthonormal Sym(V) coordinates.
struct NodalChaosCoeffs {
  Hypothesis hypothesis = Hypothesis::H1;
  int d = 1, k = 1;
  Eigen::VectorXd u;
  double alpha_u = 0.0;
  SymTensor f1;
  SymTensor f2;
  SymTensor f4_restricted;  // on U (x) (U (x) V) (H1) or V (x) Sym(V) (H3)
  // H3 only
  double A = 0.0, B = 0.0, beta = 0.0, gamma = 0.0;
  Eigen::MatrixXd M;  // H2 only
};

NodalChaosCoeffs chaos_coeffs(Hypothesis hyp, int d, int k, const Eigen::VectorXd& u,
                              const ChaosExtras& extras = {});

}  // namespace chaosvar
