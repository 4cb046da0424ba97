#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace chaosvar {

// Pairwise summation in a fixed order; the result depends only on the input
// sequence, never on how the caller produced it.
double pairwise_sum(std::span<const double> x);

struct SampleSummary {
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;     // unbiased
  double se_mean = 0.0;
  double se_variance = 0.0;  // from the fourth central moment
};

SampleSummary summarize(std::span<const double> x);

// Unbiased sample covariance.
double sample_covariance(std::span<const double> x, std::span<const double> y);

// max_i |x_i - mean| / |mean|, the spread used for "stable within p%" checks.
double relative_spread(std::span<const double> x);

}  // namespace chaosvar
