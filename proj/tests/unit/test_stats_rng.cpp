#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "chaosvar/rng.hpp"
#include "chaosvar/stats.hpp"

using namespace chaosvar;

TEST_SUITE("stats_rng") {
  TEST_CASE("pairwise sum matches exact integer sums") {
    std::vector<double> x(1000);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<double>(i + 1);
    CHECK(pairwise_sum(x) == 500500.0);
    CHECK(pairwise_sum(std::span<const double>()) == 0.0);
  }

  TEST_CASE("summary of a small sample") {
    std::vector<double> x{1, 2, 3, 4};
    const auto s = summarize(x);
    CHECK(s.n == 4);
    CHECK(s.mean == doctest::Approx(2.5));
    CHECK(s.variance == doctest::Approx(5.0 / 3.0));
    CHECK(s.se_mean == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
    CHECK(sample_covariance(x, x) == doctest::Approx(s.variance));
    CHECK(relative_spread(std::vector<double>{9, 10, 11}) == doctest::Approx(0.1));
  }

  TEST_CASE("seed derivation is stable and separates streams") {
    const auto a = derive_seed(42, "rice-means", 0, 0);
    CHECK(a == derive_seed(42, "rice-means", 0, 0));
    std::set<std::uint64_t> seen;
    for (std::uint64_t p = 0; p < 4; ++p)
      for (std::uint64_t r = 0; r < 64; ++r) seen.insert(derive_seed(42, "rice-means", p, r));
    CHECK(seen.size() == 256);
    CHECK(derive_seed(42, "rice-means", 0, 0) != derive_seed(42, "berry-scaling", 0, 0));
    CHECK(derive_seed(42, "x", 0, 0) != derive_seed(43, "x", 0, 0));
    CHECK(child_seed(a, 0) != child_seed(a, 1));
  }

  TEST_CASE("uniform draws stay inside (0, 1) and sphere draws have the radius") {
    Rng rng(3);
    for (int i = 0; i < 10000; ++i) {
      const double u = uniform01(rng);
      CHECK((u > 0.0 && u < 1.0));
    }
    std::vector<double> p(3);
    double mean_z = 0.0;
    for (int i = 0; i < 20000; ++i) {
      uniform_on_sphere(rng, 2.5, p);
      CHECK(std::hypot(p[0], p[1], p[2]) == doctest::Approx(2.5).epsilon(1e-12));
      mean_z += p[2] / 20000;
    }
    CHECK(std::abs(mean_z) < 0.05);
  }

  TEST_CASE("standard normals have unit variance") {
    Rng rng(9);
    std::vector<double> x(200000);
    for (auto& v : x) v = standard_normal(rng);
    const auto s = summarize(x);
    CHECK(std::abs(s.mean) < 4 * s.se_mean);
    CHECK(std::abs(s.variance - 1.0) < 4 * s.se_variance);
  }
}
