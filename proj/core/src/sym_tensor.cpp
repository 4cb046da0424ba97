#include "chaosvar/sym_tensor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace chaosvar {

namespace {

double factorial(int k) {
  double r = 1.0;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

std::size_t ipow(int n, int q) {
  std::size_t r = 1;
  for (int i = 0; i < q; ++i) r *= static_cast<std::size_t>(n);
  return r;
}

// Ordered tuple of a flat row-major offset.
void unflatten(std::size_t flat, int n, int q, MultiIndex& out) {
  out.resize(q);
  for (int k = q - 1; k >= 0; --k) {
    out[k] = static_cast<int>(flat % n);
    flat /= n;
  }
}

}  // namespace

void for_each_sorted_index(int n, int q, const std::function<void(const MultiIndex&)>& fn) {
  MultiIndex idx(q, 0);
  if (q == 0) {
    fn(idx);
    return;
  }
  while (true) {
    fn(idx);
    int k = q - 1;
    while (k >= 0 && idx[k] == n - 1) --k;
    if (k < 0) return;
    ++idx[k];
    for (int j = k + 1; j < q; ++j) idx[j] = idx[k];
  }
}

double index_multiplicity(const MultiIndex& idx) {
  double m = factorial(static_cast<int>(idx.size()));
  std::size_t i = 0;
  while (i < idx.size()) {
    std::size_t j = i;
    while (j < idx.size() && idx[j] == idx[i]) ++j;
    m /= factorial(static_cast<int>(j - i));
    i = j;
  }
  return m;
}

SymTensor::SymTensor(int order, int dim) : order_(order), dim_(dim) {
  if (order < 0 || dim < 1) throw std::invalid_argument("SymTensor: bad order or dim");
}

SymTensor SymTensor::scalar(double c) {
  SymTensor t(0, 1);
  t.set({}, c);
  return t;
}

SymTensor SymTensor::vector(std::span<const double> w) {
  SymTensor t(1, static_cast<int>(w.size()));
  for (std::size_t i = 0; i < w.size(); ++i) t.set({static_cast<int>(i)}, w[i]);
  return t;
}

SymTensor SymTensor::from_matrix(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("SymTensor::from_matrix: not square");
  const int n = static_cast<int>(m.rows());
  SymTensor t(2, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) t.set({i, j}, 0.5 * (m(i, j) + m(j, i)));
  return t;
}

SymTensor SymTensor::from_dense(int order, int dim, std::span<const double> dense) {
  if (dense.size() != ipow(dim, order))
    throw std::invalid_argument("SymTensor::from_dense: size mismatch");
  SymTensor t(order, dim);
  MultiIndex tup;
  for (std::size_t f = 0; f < dense.size(); ++f) {
    if (dense[f] == 0.0) continue;
    unflatten(f, dim, order, tup);
    MultiIndex s = tup;
    std::sort(s.begin(), s.end());
    t.add(s, dense[f] / index_multiplicity(s));
  }
  return t;
}

SymTensor SymTensor::outer_power(std::span<const double> w, int q) {
  const int n = static_cast<int>(w.size());
  SymTensor t(q, n);
  for_each_sorted_index(n, q, [&](const MultiIndex& idx) {
    double v = 1.0;
    for (int i : idx) v *= w[i];
    if (v != 0.0) t.set(idx, v);
  });
  return t;
}

void SymTensor::check_index(const MultiIndex& idx) const {
  if (static_cast<int>(idx.size()) != order_)
    throw std::invalid_argument("SymTensor: index length differs from order");
  for (int i : idx)
    if (i < 0 || i >= dim_) throw std::out_of_range("SymTensor: index out of range");
}

double SymTensor::get(MultiIndex idx) const {
  check_index(idx);
  std::sort(idx.begin(), idx.end());
  auto it = coeffs_.find(idx);
  return it == coeffs_.end() ? 0.0 : it->second;
}

void SymTensor::set(MultiIndex idx, double value) {
  check_index(idx);
  std::sort(idx.begin(), idx.end());
  coeffs_[idx] = value;
}

void SymTensor::add(MultiIndex idx, double value) {
  check_index(idx);
  std::sort(idx.begin(), idx.end());
  coeffs_[idx] += value;
}

std::vector<double> SymTensor::to_dense() const {
  std::vector<double> dense(ipow(dim_, order_), 0.0);
  MultiIndex tup;
  for (std::size_t f = 0; f < dense.size(); ++f) {
    unflatten(f, dim_, order_, tup);
    std::sort(tup.begin(), tup.end());
    auto it = coeffs_.find(tup);
    if (it != coeffs_.end()) dense[f] = it->second;
  }
  return dense;
}

Eigen::MatrixXd SymTensor::to_matrix() const {
  if (order_ != 2) throw std::invalid_argument("SymTensor::to_matrix: order must be 2");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim_, dim_);
  for (const auto& [idx, v] : coeffs_) {
    m(idx[0], idx[1]) = v;
    m(idx[1], idx[0]) = v;
  }
  return m;
}

double SymTensor::evaluate(std::span<const double> w) const {
  if (static_cast<int>(w.size()) != dim_) throw std::invalid_argument("SymTensor::evaluate: dim");
  double s = 0.0;
  for (const auto& [idx, v] : coeffs_) {
    double p = v * index_multiplicity(idx);
    for (int i : idx) p *= w[i];
    s += p;
  }
  return s;
}

double SymTensor::max_abs() const {
  double m = 0.0;
  for (const auto& [idx, v] : coeffs_) m = std::max(m, std::abs(v));
  return m;
}

SymTensor& SymTensor::operator+=(const SymTensor& o) {
  if (o.order_ != order_ || o.dim_ != dim_) throw std::invalid_argument("SymTensor: shape mismatch");
  for (const auto& [idx, v] : o.coeffs_) coeffs_[idx] += v;
  return *this;
}

SymTensor& SymTensor::operator*=(double s) {
  for (auto& [idx, v] : coeffs_) v *= s;
  return *this;
}

double pair(const SymTensor& f, const SymTensor& g) {
  // order-0 tensors are scalars whatever their nominal dimension
  if (f.order() != g.order() || (f.order() > 0 && f.dim() != g.dim()))
    throw std::invalid_argument("pair: shape mismatch");
  double s = 0.0;
  for (const auto& [idx, v] : f.entries()) {
    auto it = g.entries().find(idx);
    if (it != g.entries().end()) s += v * it->second * index_multiplicity(idx);
  }
  return s;
}

std::complex<double> multi_form_pairing(std::span<const Eigen::MatrixXcd> forms,
                                        const SymTensor& f, const SymTensor& g) {
  const int q = f.order();
  const int n = f.dim();
  if (g.order() != q || g.dim() != n) throw std::invalid_argument("multi_form_pairing: shape");
  if (static_cast<int>(forms.size()) != q)
    throw std::invalid_argument("multi_form_pairing: need one form per slot");
  for (const auto& m : forms)
    if (m.rows() != n || m.cols() != n) throw std::invalid_argument("multi_form_pairing: form dim");
  if (q == 0) return f.get({}) * g.get({});

  const std::size_t total = ipow(n, q);
  std::vector<double> gd = g.to_dense();
  std::vector<std::complex<double>> cur(gd.begin(), gd.end()), next(total);
  // Contract slot k: next[.., i_k, ..] = sum_j Omega_k[i_k, j] cur[.., j, ..].
  for (int k = 0; k < q; ++k) {
    const std::size_t stride = ipow(n, q - 1 - k);
    const std::size_t block = stride * n;
    for (std::size_t base = 0; base < total; base += block) {
      for (std::size_t inner = 0; inner < stride; ++inner) {
        for (int i = 0; i < n; ++i) {
          std::complex<double> acc = 0.0;
          for (int j = 0; j < n; ++j) acc += forms[k](i, j) * cur[base + j * stride + inner];
          next[base + i * stride + inner] = acc;
        }
      }
    }
    std::swap(cur, next);
  }
  std::vector<double> fd = f.to_dense();
  std::complex<double> s = 0.0;
  for (std::size_t t = 0; t < total; ++t) s += fd[t] * cur[t];
  return s;
}

double tensor_power_pairing(const Eigen::MatrixXd& omega, const SymTensor& f,
                            const SymTensor& g) {
  std::vector<Eigen::MatrixXcd> forms(f.order(), omega.cast<std::complex<double>>());
  return multi_form_pairing(forms, f, g).real();
}

}  // namespace chaosvar
