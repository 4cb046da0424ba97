#include "chaosvar/variance.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <numbers>
#include <random>

#include "chaosvar/error.hpp"
#include "chaosvar/rng.hpp"
#include "chaosvar/stats.hpp"

namespace chaosvar {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kFourPi2 = 4.0 * kPi * kPi;

// Tr(S F S F) for Hermitian S and real symmetric F.
double trace_sfsf(const Eigen::MatrixXcd& s, const Eigen::MatrixXcd& f) {
  const Eigen::MatrixXcd sf = s * f;
  return (sf * sf).trace().real();
}

double factorial(int q) { return std::tgamma(q + 1.0); }

// f^T (S_1 (x) ... (x) S_q) f for a dense row-major tensor f of order q.
class TensorPowerPairing {
 public:
  TensorPowerPairing(const SymTensor& f) : q_(f.order()), n_(f.dim()) {
    const auto dense = f.to_dense();
    f_ = Eigen::Map<const Eigen::VectorXd>(dense.data(), static_cast<Eigen::Index>(dense.size()));
  }

  double operator()(const std::vector<const Eigen::MatrixXcd*>& forms) const {
    Eigen::VectorXcd t = f_.cast<cdouble>();
    Eigen::VectorXcd next(t.size());
    // apply forms[k] on slot k; slot k has stride n^(q-1-k)
    for (int k = 0; k < q_; ++k) {
      const Eigen::MatrixXcd& s = *forms[k];
      Eigen::Index stride = 1;
      for (int r = k + 1; r < q_; ++r) stride *= n_;
      const Eigen::Index block = stride * n_;
      next.setZero();
      for (Eigen::Index base = 0; base < t.size(); base += block)
        for (Eigen::Index off = 0; off < stride; ++off)
          for (int i = 0; i < n_; ++i) {
            cdouble acc = 0.0;
            for (int j = 0; j < n_; ++j) acc += s(i, j) * t(base + j * stride + off);
            next(base + i * stride + off) = acc;
          }
      t.swap(next);
    }
    return (f_.cast<cdouble>().transpose() * t)(0).real();
  }

 private:
  int q_, n_;
  Eigen::VectorXd f_;
};

double h3_bracket(const NodalChaosCoeffs& c, double r2) {
  return -1.0 + kFourPi2 * r2 * beta0(c.d) / (c.d * c.beta);
}

}  // namespace

double limit_variance_chaos1(const HermitianForm& sigma_at_0, const Eigen::VectorXd& u, double alpha_u) {
  if (u.size() != sigma_at_0.dim()) throw ConfigError("limit_variance_chaos1: dimension mismatch");
  const Eigen::VectorXcd uc = u.cast<cdouble>();
  const double quad = (uc.adjoint() * sigma_at_0.matrix() * uc)(0).real();
  return alpha_u * alpha_u * quad;
}

Chaos2Limit limit_variance_chaos2(const SpectralMeasure& mu_x, const SymTensor& f2) {
  const auto* leb = std::get_if<LebesgueDensity>(&mu_x);
  if (!leb) throw ConfigError("limit_variance_chaos2: a Lebesgue density is required");
  if (f2.order() != 2 || f2.dim() != leb->dim_target)
    throw ConfigError("limit_variance_chaos2: f2 must be a bilinear form on the target space");
  const Eigen::MatrixXcd f = f2.to_matrix().cast<cdouble>();
  const double vol = leb->grid.cell_volume();
  std::vector<double> terms(leb->values.size());
  Chaos2Limit out;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    terms[i] = 0.5 * vol * trace_sfsf(leb->values[i].matrix(), f);
    if (!std::isfinite(terms[i])) out.diverged = true;
  }
  if (out.diverged) {
    out.value = std::numeric_limits<double>::infinity();
    return out;
  }
  out.value = pairwise_sum(terms);
  std::vector<double> sorted = terms;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  for (std::size_t m = 1; m <= sorted.size(); m *= 2)
    out.partial.push_back(pairwise_sum(std::span<const double>(sorted.data(), m)));
  if (out.value > 0.0 && sorted.front() > 0.5 * out.value) out.diverged = true;
  return out;
}

double second_chaos_integrand(const NodalChaosCoeffs& c, const Eigen::VectorXd& xi,
                              const HermitianForm& density) {
  const double r2 = xi.squaredNorm();
  const double a2 = c.alpha_u * c.alpha_u;
  switch (c.hypothesis) {
    case Hypothesis::H1: {
      if (density.dim() != c.k) throw ConfigError("second_chaos_integrand: density has wrong dimension");
      const double s = -1.0 + kFourPi2 * r2 / c.d;
      Eigen::MatrixXcd g = s * Eigen::MatrixXcd::Identity(c.k, c.k);
      const Eigen::VectorXcd uc = c.u.cast<cdouble>();
      g += uc * uc.transpose();
      const Eigen::MatrixXcd sg = density.matrix() * g;
      return a2 * (sg * sg).trace().real();
    }
    case Hypothesis::H2: {
      const double b = -1.0 + kFourPi2 * xi.dot(c.M * xi);
      return a2 * b * b * std::norm(density(0, 0));
    }
    case Hypothesis::H3: {
      const double w = density(0, 0).real();
      const double lead = kFourPi2 * r2 * c.alpha_u;
      const double b = h3_bracket(c, r2);
      return w * w * lead * lead * b * b;
    }
  }
  return 0.0;
}

SpectralMeasure lifted_measure(const SpectralMeasure& psi, const NodalChaosCoeffs& c) {
  if (c.hypothesis == Hypothesis::H3) return hessian_jet_lift(psi, c.beta, c.gamma);
  return jet_lift(psi);
}

CancellationVerdict cancellation_verdict(const SpectralMeasure& psi, const NodalChaosCoeffs& c) {
  if (dim_freq(psi) != c.d) throw ConfigError("cancellation_verdict: dimension mismatch");
  CancellationVerdict v;
  const auto atoms = quadrature_atoms(psi);
  for (const auto& atom : atoms) {
    const double val = second_chaos_integrand(c, atom.freq, atom.form);
    const double r2 = atom.freq.squaredNorm();
    const double tr = atom.form.trace();
    double ref = 0.0;
    switch (c.hypothesis) {
      case Hypothesis::H1: {
        const double m = 1.0 + c.u.squaredNorm() + kFourPi2 * r2 / c.d;
        ref = c.alpha_u * c.alpha_u * tr * tr * m * m * c.k;
        break;
      }
      case Hypothesis::H2: {
        const double m = 1.0 + kFourPi2 * r2 * std::max(1.0, c.M.norm());
        ref = c.alpha_u * c.alpha_u * tr * tr * m * m;
        break;
      }
      case Hypothesis::H3: {
        const double lead = kFourPi2 * r2 * c.alpha_u;
        const double m = 1.0 + std::abs(h3_bracket(c, r2) + 1.0);
        ref = tr * tr * lead * lead * m * m;
        break;
      }
    }
    v.sup = std::max(v.sup, val);
    v.scale = std::max(v.scale, ref);
  }
  v.cancels = v.sup <= 1e-10 * v.scale;
  v.cone = image_in_cone(lifted_measure(psi, c), c.f2);
  v.agrees = v.cone.contained == v.cancels;
  return v;
}

ChaosVariance chaotic_variance_atomic(int q, const AtomicMeasure& mu, const SymTensor& fq,
                                      const TestFunction& phi, double lambda,
                                      const ChaosVarianceOptions& opts) {
  if (q < 1 || q > 4) throw ConfigError("chaotic_variance_atomic: need 1 <= q <= 4");
  if (fq.order() != q || fq.dim() != mu.dim_target)
    throw ConfigError("chaotic_variance_atomic: f_q has wrong order or dimension");
  if (phi.dim() != mu.dim_freq) throw ConfigError("chaotic_variance_atomic: test function dimension");
  if (!(lambda > 0.0)) throw ConfigError("chaotic_variance_atomic: lambda must be positive");
  const std::size_t K = mu.atoms.size();
  ChaosVariance out;
  if (K == 0) return out;

  const TensorPowerPairing pairing(fq);
  std::vector<Eigen::MatrixXcd> forms;
  forms.reserve(K);
  for (const auto& a : mu.atoms) forms.push_back(a.form.matrix());
  const double qf = factorial(q);

  const double tuples = std::pow(static_cast<double>(K), q);
  if (tuples <= opts.budget) {
    std::size_t inner = 1;
    for (int i = 1; i < q; ++i) inner *= K;
    std::vector<double> lead(K), terms(inner);
    std::vector<const Eigen::MatrixXcd*> fs(q);
    std::vector<std::size_t> idx(q);
    double min_term = std::numeric_limits<double>::infinity();
    for (std::size_t i0 = 0; i0 < K; ++i0) {
      for (std::size_t t = 0; t < inner; ++t) {
        idx[0] = i0;
        std::size_t rem = t;
        for (int s = q - 1; s >= 1; --s) {
          idx[s] = rem % K;
          rem /= K;
        }
        Eigen::VectorXd xi = Eigen::VectorXd::Zero(mu.dim_freq);
        for (int s = 0; s < q; ++s) {
          xi += mu.atoms[idx[s]].freq;
          fs[s] = &forms[idx[s]];
        }
        const double g = phi.gamma_lambda(xi, lambda);
        const double term = g == 0.0 ? 0.0 : g * pairing(fs);
        terms[t] = term;
        min_term = std::min(min_term, term);
      }
      lead[i0] = pairwise_sum(terms);
    }
    out.value = pairwise_sum(lead) / qf;
    out.tuples = tuples;
    out.min_term = min_term;
    return out;
  }

  std::vector<double> weights(K);
  for (std::size_t i = 0; i < K; ++i) weights[i] = std::max(mu.atoms[i].form.trace(), 0.0);
  const double wsum = pairwise_sum(weights);
  if (!(wsum > 0.0)) return out;
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  Rng rng(opts.seed);
  std::vector<double> samples(opts.mc_samples);
  std::vector<const Eigen::MatrixXcd*> fs(q);
  for (std::size_t s = 0; s < opts.mc_samples; ++s) {
    Eigen::VectorXd xi = Eigen::VectorXd::Zero(mu.dim_freq);
    double inv_p = 1.0;
    for (int k = 0; k < q; ++k) {
      const std::size_t i = pick(rng);
      xi += mu.atoms[i].freq;
      fs[k] = &forms[i];
      inv_p *= wsum / weights[i];
    }
    const double g = phi.gamma_lambda(xi, lambda);
    samples[s] = g == 0.0 ? 0.0 : g * pairing(fs) * inv_p;
  }
  const auto sum = summarize(samples);
  out.value = sum.mean / qf;
  out.se = sum.se_mean / qf;
  out.exact = false;
  out.tuples = static_cast<double>(opts.mc_samples);
  return out;
}

}  // namespace chaosvar
