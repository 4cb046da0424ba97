#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "chaosvar/chaos_coeffs.hpp"
#include "chaosvar/hermitian_form.hpp"
#include "chaosvar/spectral_measure.hpp"
#include "chaosvar/sym_tensor.hpp"
#include "chaosvar/test_function.hpp"

namespace chaosvar {

// alpha_u^2 Sigma(0)(u, u): first-chaos limit of a level-u functional with
// f_1 = alpha_u (u, 0). Assumes Y(0) independent of grad Y(0) and alpha_u
// computed for the actual scale of grad Y.
double limit_variance_chaos1(const HermitianForm& sigma_at_0, const Eigen::VectorXd& u, double alpha_u);

struct Chaos2Limit {
  double value = 0.0;
  bool diverged = false;
  std::vector<double> partial;  // partial integrals over the 1, 2, 4, ... largest cells
};

// (1/2) int Tr(Sigma f2 Sigma f2) d xi over a Lebesgue density. Flags
// divergence when the integrand is not finite or a single cell carries more
// than half of the integral (a point singularity the lattice cannot resolve).
Chaos2Limit limit_variance_chaos2(const SpectralMeasure& mu_x, const SymTensor& f2);

// Closed-form integrand Tr(Sigma_X f2 Sigma_X f2) at xi, where `density` is the
// base form (k x k for H1, 1 x 1 for H2 / H3) before the jet lift.
//   H1: alpha_u^2 Tr((s G)^2), G = (-1 + 4 pi^2 |xi|^2 / d) I + u u^T
//   H2: alpha^2 (-1 + 4 pi^2 xi^T M xi)^2 |psi_1|^2
//   H3: w^2 (4 pi^2 |xi|^2 alpha)^2 (-1 + 4 pi^2 |xi|^2 beta0 / (d beta))^2
double second_chaos_integrand(const NodalChaosCoeffs& c, const Eigen::VectorXd& xi,
                              const HermitianForm& density);

struct CancellationVerdict {
  bool cancels = false;
  double sup = 0.0;
  double scale = 0.0;
  ConeTest cone;        // image_in_cone of the lifted measure against f2
  bool agrees = false;  // cone.contained == cancels
};

CancellationVerdict cancellation_verdict(const SpectralMeasure& psi, const NodalChaosCoeffs& c);

// The lift matching the hypothesis: jet_lift (H1, H2) or hessian_jet_lift (H3).
SpectralMeasure lifted_measure(const SpectralMeasure& psi, const NodalChaosCoeffs& c);

struct ChaosVarianceOptions {
  double budget = 1e7;              // max number of q-tuples summed exactly
  std::size_t mc_samples = 200000;  // tuple samples beyond the budget
  std::uint64_t seed = 11;
};

struct ChaosVariance {
  double value = 0.0;
  double se = 0.0;          // 0 when exact
  bool exact = true;
  double tuples = 0.0;      // tuples summed or sampled
  double min_term = 0.0;    // smallest tuple contribution (exact mode)
};

// Var(Z_lambda^{(q)}) = (1/q!) sum over ordered q-tuples of atoms of
// gamma_lambda(xi_1 + ... + xi_q) (Sigma_1 (x) ... (x) Sigma_q)(f_q, f_q).
// Beyond the budget, tuples are sampled proportionally to the atom traces.
ChaosVariance chaotic_variance_atomic(int q, const AtomicMeasure& mu, const SymTensor& fq,
                                      const TestFunction& phi, double lambda,
                                      const ChaosVarianceOptions& opts = {});

}  // namespace chaosvar
