#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "chaosvar/spectral_measure.hpp"

namespace chaosvar {

struct DiscretizationSpec {
  enum class Strategy { SphereEquiangular, GridQuadrature, NativeAtomic };
  Strategy strategy = Strategy::NativeAtomic;
  int n_atoms = 0;
};

// Symmetric atomic approximation. Sphere: equiangular directions (d = 2),
// antipodal Fibonacci lattice (d = 3), {+-rho} (d = 1), equal weights.
// Grid: each lattice cell becomes an atom; with n_atoms > 0 (d = 1 only, or an
// exact d-th power) the density is first resampled by multilinear interpolation
// onto that many cells. Mass is preserved by rescaling.
AtomicMeasure discretize(const SpectralMeasure& psi, const DiscretizationSpec& spec);

// Canonical half of a symmetric atomic measure with Hermitian square roots
// precomputed; shared by all realizations of one discretization.
class FieldModel {
 public:
  explicit FieldModel(const AtomicMeasure& mu, std::string id = "atomic");

  int dim_freq() const { return dim_freq_; }
  int dim_target() const { return dim_target_; }
  int num_terms() const { return static_cast<int>(freqs_.cols()); }
  const Eigen::MatrixXd& freqs() const { return freqs_; }  // d x K
  const std::string& id() const { return id_; }
  double max_frequency() const;
  double min_frequency_gap() const;
  // mixes()[k] L_k with L_k L_k^H = form of canonical atom k
  const std::vector<Eigen::MatrixXcd>& mixes() const { return mixes_; }

 private:
  friend class FieldRealization;
  int dim_freq_ = 1;
  int dim_target_ = 1;
  Eigen::MatrixXd freqs_;
  std::vector<Eigen::MatrixXcd> mixes_;
  std::vector<bool> zero_freq_;
  std::string id_;
};

// Y(v) = sum_k Re[c_k e^{2 i pi xi_k . v}] over canonical atoms, where
// c_k = sqrt(2) L_k (a_k + i b_k) and a_k, b_k are independent standard normal
// vectors (c = L a for an atom at the origin, L real).
class FieldRealization {
 public:
  FieldRealization(std::shared_ptr<const FieldModel> model, std::uint64_t seed);

  const FieldModel& model() const { return *model_; }
  std::shared_ptr<const FieldModel> model_ptr() const { return model_; }
  std::uint64_t seed() const { return seed_; }
  const Eigen::MatrixXcd& coeffs() const { return coeffs_; }  // n x K
  const Eigen::MatrixXd& gauss_a() const { return a_; }
  const Eigen::MatrixXd& gauss_b() const { return b_; }

  Eigen::VectorXd value(const Eigen::VectorXd& v) const;
  Eigen::MatrixXd gradient(const Eigen::VectorXd& v) const;  // n x d
  Eigen::MatrixXd hessian(const Eigen::VectorXd& v, int component = 0) const;  // d x d

 private:
  std::shared_ptr<const FieldModel> model_;
  std::uint64_t seed_;
  Eigen::MatrixXcd coeffs_;
  Eigen::MatrixXd a_, b_;
};

FieldRealization sample_field(const AtomicMeasure& atomic, std::uint64_t seed);

struct JetPoint {
  Eigen::VectorXd value;                // n
  Eigen::MatrixXd gradient;             // n x d
  std::vector<Eigen::MatrixXd> hessian; // n of d x d, order 2 only
};
// Analytic jet at each point; order 0, 1 or 2.
std::vector<JetPoint> eval_jet(const FieldRealization& real, std::span<const Eigen::VectorXd> points,
                               int order = 1);

// Phase matrix for a fixed point set, reused across realizations of one model.
class PointPhases {
 public:
  PointPhases(const FieldModel& model, std::span<const Eigen::VectorXd> points);
  std::size_t num_points() const { return static_cast<std::size_t>(re_.rows()); }
  // P x n values; with deriv >= 0 the partial derivative along that axis.
  Eigen::MatrixXd evaluate(const FieldRealization& real, int deriv = -1) const;

 private:
  Eigen::MatrixXd freqs_;
  Eigen::MatrixXd re_, im_;  // P x K
};

// Regular 2-d grid x_i = x0 + i h, y_j = y0 + j h, values as an ny x nx matrix
// (row = y). The phase is separable, so one realization costs two real GEMMs.
class GridPhases2D {
 public:
  GridPhases2D(const FieldModel& model, double x0, double y0, double h, int nx, int ny);
  int nx() const { return static_cast<int>(xr_.rows()); }
  int ny() const { return static_cast<int>(yr_.rows()); }
  double h() const { return h_; }
  double x0() const { return x0_; }
  double y0() const { return y0_; }
  // deriv: -1 value, 0 / 1 first partials.
  Eigen::MatrixXd evaluate(const FieldRealization& real, int component = 0, int deriv = -1) const;

 private:
  Eigen::MatrixXd freqs_;
  double x0_, y0_, h_;
  Eigen::MatrixXd xr_, xi_, yr_, yi_;  // nx x K, ny x K
};

// Regular 1-d grid x_i = x0 + i h; values of one component (and derivatives).
class GridPhases1D {
 public:
  GridPhases1D(const FieldModel& model, double x0, double h, int n);
  int size() const { return static_cast<int>(re_.rows()); }
  double x0() const { return x0_; }
  double h() const { return h_; }
  Eigen::VectorXd evaluate(const FieldRealization& real, int component = 0, int deriv_order = 0) const;

 private:
  Eigen::MatrixXd freqs_;
  double x0_, h_;
  Eigen::MatrixXd re_, im_;
};

}  // namespace chaosvar
