#include "chaosvar/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace chaosvar {

double pairwise_sum(std::span<const double> x) {
  if (x.size() <= 16) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
  }
  const std::size_t half = x.size() / 2;
  return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

SampleSummary summarize(std::span<const double> x) {
  SampleSummary s;
  s.n = x.size();
  if (s.n == 0) return s;
  s.mean = pairwise_sum(x) / static_cast<double>(s.n);
  if (s.n < 2) return s;
  std::vector<double> d2(s.n), d4(s.n);
  for (std::size_t i = 0; i < s.n; ++i) {
    const double d = x[i] - s.mean;
    d2[i] = d * d;
    d4[i] = d2[i] * d2[i];
  }
  const double n = static_cast<double>(s.n);
  const double m2 = pairwise_sum(d2) / n;
  const double m4 = pairwise_sum(d4) / n;
  s.variance = m2 * n / (n - 1.0);
  s.se_mean = std::sqrt(s.variance / n);
  s.se_variance = std::sqrt(std::max(0.0, (m4 - m2 * m2 * (n - 3.0) / (n - 1.0)) / n));
  return s;
}

double sample_covariance(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("sample_covariance: size mismatch or n < 2");
  const double n = static_cast<double>(x.size());
  const double mx = pairwise_sum(x) / n;
  const double my = pairwise_sum(y) / n;
  std::vector<double> p(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) p[i] = (x[i] - mx) * (y[i] - my);
  return pairwise_sum(p) / (n - 1.0);
}

double relative_spread(std::span<const double> x) {
  if (x.empty()) return 0.0;
  const double m = pairwise_sum(x) / static_cast<double>(x.size());
  double worst = 0.0;
  for (double v : x) worst = std::max(worst, std::abs(v - m));
  return worst / std::abs(m);
}

}  // namespace chaosvar
