#include <doctest.h>

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "chaosvar/rng.hpp"
#include "chaosvar/sym_tensor.hpp"

using namespace chaosvar;

namespace {

SymTensor random_tensor(int q, int n, Rng& rng) {
  SymTensor t(q, n);
  for_each_sorted_index(n, q, [&](const MultiIndex& idx) { t.set(idx, standard_normal(rng)); });
  return t;
}

}  // namespace

TEST_SUITE("sym_tensor") {
  TEST_CASE("sorted indices and multiplicities") {
    int count = 0;
    double total = 0.0;
    for_each_sorted_index(3, 4, [&](const MultiIndex& idx) {
      ++count;
      total += index_multiplicity(idx);
    });
    CHECK(count == 15);        // C(3 + 4 - 1, 4)
    CHECK(total == 81.0);      // 3^4 ordered tuples
    CHECK(index_multiplicity({0, 0, 1}) == 3.0);
    CHECK(index_multiplicity({0, 1, 2}) == 6.0);
  }

  TEST_CASE("entries are stored once per sorted index") {
    SymTensor t(3, 2);
    t.set({1, 0, 1}, 2.5);
    CHECK(t.get({1, 1, 0}) == 2.5);
    CHECK(t.get({0, 1, 1}) == 2.5);
    CHECK(t.entries().size() == 1);
    t.add({1, 1, 0}, 0.5);
    CHECK(t.get({0, 1, 1}) == 3.0);
  }

  TEST_CASE("pairing equals the Frobenius pairing of the dense tensors") {
    Rng rng(17);
    for (int n = 1; n <= 4; ++n)
      for (int q = 0; q <= 4; ++q) {
        const SymTensor f = random_tensor(q, n, rng), g = random_tensor(q, n, rng);
        const auto df = f.to_dense(), dg = g.to_dense();
        double frob = 0.0;
        for (std::size_t i = 0; i < df.size(); ++i) frob += df[i] * dg[i];
        CHECK(pair(f, g) == doctest::Approx(frob).epsilon(1e-12));
      }
  }

  TEST_CASE("from_dense symmetrizes and round-trips symmetric input") {
    Rng rng(5);
    const SymTensor f = random_tensor(3, 3, rng);
    const auto dense = f.to_dense();
    const SymTensor g = SymTensor::from_dense(3, 3, dense);
    CHECK(pair(f + (-1.0) * g, f + (-1.0) * g) == doctest::Approx(0.0).epsilon(1e-24));
    // a non-symmetric array is averaged over permutations
    std::vector<double> m{0, 1, 0, 0};
    const SymTensor s = SymTensor::from_dense(2, 2, m);
    CHECK(s.get({0, 1}) == 0.5);
  }

  TEST_CASE("outer power evaluation") {
    std::vector<double> w{0.3, -1.2};
    const SymTensor t = SymTensor::outer_power(w, 3);
    std::vector<double> v{2.0, 0.5};
    const double dot = 0.3 * 2.0 - 1.2 * 0.5;
    CHECK(t.evaluate(v) == doctest::Approx(std::pow(dot, 3)));
    CHECK(pair(t, SymTensor::outer_power(v, 3)) == doctest::Approx(std::pow(dot, 3)));
  }

  TEST_CASE("tensor power pairing of order two is a matrix trace") {
    Eigen::MatrixXd f(2, 2), g(2, 2), om(2, 2);
    f << 1, 0.5, 0.5, -2;
    g << 0.3, 1, 1, 0.7;
    om << 0.9, 0.2, -0.1, 0.4;
    const double expect = (f * om * g * om.transpose()).trace();
    CHECK(tensor_power_pairing(om, SymTensor::from_matrix(f), SymTensor::from_matrix(g)) ==
          doctest::Approx(expect));
    std::vector<Eigen::MatrixXcd> forms{om.cast<std::complex<double>>(), om.cast<std::complex<double>>()};
    CHECK(multi_form_pairing(forms, SymTensor::from_matrix(f), SymTensor::from_matrix(g)).real() ==
          doctest::Approx(expect));
  }

  TEST_CASE("index checks") {
    SymTensor t(2, 2);
    CHECK_THROWS(t.set({0, 2}, 1.0));
    CHECK_THROWS(t.set({0}, 1.0));
  }
}
