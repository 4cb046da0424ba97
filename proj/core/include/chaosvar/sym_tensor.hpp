#pragma once

#include <complex>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace chaosvar {

// Sorted multi-index of length q over {0, ..., n-1}.
using MultiIndex = std::vector<int>;

// Visit every sorted multi-index of length q over n symbols, in lexicographic order.
void for_each_sorted_index(int n, int q, const std::function<void(const MultiIndex&)>& fn);

// q! / prod(count_j!): the number of ordered tuples sharing a sorted index.
double index_multiplicity(const MultiIndex& idx);

// Symmetric q-linear form on R^n. One coefficient per sorted multi-index;
// missing entries are zero. Index convention is 0-based.
class SymTensor {
 public:
  SymTensor() = default;
  SymTensor(int order, int dim);

  static SymTensor scalar(double c);
  static SymTensor vector(std::span<const double> w);
  static SymTensor from_matrix(const Eigen::MatrixXd& m);  // symmetrized
  // Symmetrizes a dense row-major n^q array.
  static SymTensor from_dense(int order, int dim, std::span<const double> dense);
  // w^{(x)q}: entries prod_k w_{i_k}.
  static SymTensor outer_power(std::span<const double> w, int q);

  int order() const { return order_; }
  int dim() const { return dim_; }

  double get(MultiIndex idx) const;  // idx need not be sorted
  void set(MultiIndex idx, double value);
  void add(MultiIndex idx, double value);
  const std::map<MultiIndex, double>& entries() const { return coeffs_; }

  // Dense row-major n^q array, value at every ordered tuple.
  std::vector<double> to_dense() const;
  Eigen::MatrixXd to_matrix() const;  // order 2 only

  // f(w, ..., w).
  double evaluate(std::span<const double> w) const;

  double max_abs() const;

  SymTensor& operator+=(const SymTensor& o);
  SymTensor& operator*=(double s);
  friend SymTensor operator+(SymTensor a, const SymTensor& b) { return a += b; }
  friend SymTensor operator*(double s, SymTensor a) { return a *= s; }

 private:
  void check_index(const MultiIndex& idx) const;

  int order_ = 0;
  int dim_ = 1;
  std::map<MultiIndex, double> coeffs_;
};

// <f, g> summed over all ordered index tuples (Frobenius pairing of the dense tensors).
double pair(const SymTensor& f, const SymTensor& g);

// (Omega_1 (x) ... (x) Omega_q)(f, g) = sum f_I g_J prod_k Omega_k[i_k, j_k].
// Complex forms allowed; returns the real part (callers pass Hermitian data
// for which the result is real).
std::complex<double> multi_form_pairing(std::span<const Eigen::MatrixXcd> forms,
                                        const SymTensor& f, const SymTensor& g);
double tensor_power_pairing(const Eigen::MatrixXd& omega, const SymTensor& f,
                            const SymTensor& g);

}  // namespace chaosvar
