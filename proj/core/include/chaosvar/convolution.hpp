#pragma once

#include <cstddef>

#include "chaosvar/spectral_measure.hpp"

namespace chaosvar {

struct ConvolutionOptions {
  bool conjugate_reflect = false;  // use mu2(-E)^c: atoms xi1 - xi2, forms Sigma1 (x) conj(Sigma2)
  std::size_t budget = 1000000;    // maximal atom-pair count
  double merge_tol = 1e-9;         // coincident sums merged within this sup-distance
};

// Push-forward of mu1 (x) mu2 by addition. Output forms are Kronecker products
// (target index i * dim2 + j). Throws BudgetExceeded beyond the pair budget.
AtomicMeasure convolve_atomic(const AtomicMeasure& mu1, const AtomicMeasure& mu2,
                              const ConvolutionOptions& opt = {});

// Merge atoms closer than tol (sup norm), summing forms. Order is deterministic.
AtomicMeasure merge_atoms(const AtomicMeasure& mu, double tol);

}  // namespace chaosvar
