#include "chaosvar/convolution.hpp"

#include <algorithm>
#include <numeric>

#include "chaosvar/error.hpp"

namespace chaosvar {

AtomicMeasure merge_atoms(const AtomicMeasure& mu, double tol) {
  const std::size_t n = mu.atoms.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = mu.atoms[a].freq;
    const auto& y = mu.atoms[b].freq;
    return std::lexicographical_compare(x.data(), x.data() + x.size(), y.data(), y.data() + y.size());
  });
  AtomicMeasure out;
  out.dim_freq = mu.dim_freq;
  out.dim_target = mu.dim_target;
  // Clusters are scanned backwards while their first coordinate stays within tol.
  for (std::size_t k : order) {
    const Atom& a = mu.atoms[k];
    bool merged = false;
    for (std::size_t c = out.atoms.size(); c-- > 0;) {
      if (a.freq(0) - out.atoms[c].freq(0) > tol) break;
      if ((out.atoms[c].freq - a.freq).cwiseAbs().maxCoeff() <= tol) {
        out.atoms[c].form += a.form;
        merged = true;
        break;
      }
    }
    if (!merged) out.atoms.push_back(a);
  }
  return out;
}

AtomicMeasure convolve_atomic(const AtomicMeasure& mu1, const AtomicMeasure& mu2,
                              const ConvolutionOptions& opt) {
  if (mu1.dim_freq != mu2.dim_freq) throw std::invalid_argument("convolve_atomic: dim_freq mismatch");
  const double pairs = static_cast<double>(mu1.atoms.size()) * static_cast<double>(mu2.atoms.size());
  if (pairs > static_cast<double>(opt.budget))
    throw BudgetExceeded("convolve_atomic: " + std::to_string(static_cast<long long>(pairs)) +
                         " atom pairs exceed the budget; use the sampling estimator "
                         "(density_at_zero with a sum_sampler) instead");
  AtomicMeasure raw;
  raw.dim_freq = mu1.dim_freq;
  raw.dim_target = mu1.dim_target * mu2.dim_target;
  raw.atoms.reserve(static_cast<std::size_t>(pairs));
  for (const Atom& a : mu1.atoms) {
    for (const Atom& b : mu2.atoms) {
      if (opt.conjugate_reflect)
        raw.atoms.push_back({a.freq - b.freq, a.form.kron(b.form.conj())});
      else
        raw.atoms.push_back({a.freq + b.freq, a.form.kron(b.form)});
    }
  }
  return merge_atoms(raw, opt.merge_tol);
}

}  // namespace chaosvar
