#pragma once

#include <functional>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "chaosvar/hermitian_form.hpp"
#include "chaosvar/sym_tensor.hpp"

namespace chaosvar {

// Fourier convention: Omega(v) = int e^{2 i pi xi.v} d mu(xi), with
// Omega(h) = E[X(w + h) X(w)^T].

struct Atom {
  Eigen::VectorXd freq;
  HermitianForm form;
};

struct AtomicMeasure {
  int dim_freq = 1;
  int dim_target = 1;
  std::vector<Atom> atoms;
};

// How a sphere-supported measure of a field Y maps to a derived field.
struct SphereLift {
  enum class Kind { None, Jet, HessianJet };
  Kind kind = Kind::None;
  double beta = 0.0;   // HessianJet only
  double gamma = 0.0;  // HessianJet only
};

// mu = int_{S^{d-1}} form(theta) d sigma(theta) pushed to the sphere of radius
// `radius`, sigma the uniform probability. `profile` samples the form on a
// direction grid; lookups use the nearest node. One node means isotropic.
struct SphereDensity {
  int dim_freq = 2;
  double radius = 1.0;
  std::vector<Eigen::VectorXd> directions;
  std::vector<HermitianForm> profile;
  SphereLift lift;
  int quad_nodes = 0;  // 0 picks a default per dimension

  int base_target() const { return profile.empty() ? 1 : profile.front().dim(); }
  int dim_target() const;
  HermitianForm form_at(const Eigen::VectorXd& unit_direction) const;  // lift applied
};

// Cell-centred rectangular lattice: node i has coordinates lower + (i + 1/2) * spacing.
struct Lattice {
  Eigen::VectorXd lower;
  Eigen::VectorXd spacing;
  std::vector<int> counts;

  int dim() const { return static_cast<int>(counts.size()); }
  std::size_t size() const;
  double cell_volume() const;
  Eigen::VectorXd node(std::size_t flat) const;  // last axis fastest
  static Lattice symmetric_box(int d, double half_width, int per_axis);
};

// Density sampled on a lattice; mass of a cell = value * cell volume.
struct LebesgueDensity {
  int dim_target = 1;
  Lattice grid;
  std::vector<HermitianForm> values;

  int dim_freq() const { return grid.dim(); }
};

using SpectralMeasure = std::variant<AtomicMeasure, SphereDensity, LebesgueDensity>;

int dim_freq(const SpectralMeasure& mu);
int dim_target(const SpectralMeasure& mu);

// Weighted atoms representing mu: exact for atomic measures, quadrature nodes
// (sphere rule, lattice cells) otherwise. Atoms with zero form are kept.
std::vector<Atom> quadrature_atoms(const SpectralMeasure& mu);

HermitianForm total_mass(const SpectralMeasure& mu);
// r(v) = int e^{2 i pi <xi, v>} dmu(xi); real for symmetric measures, Hermitian only at v = 0.
Eigen::MatrixXcd covariance_eval(const SpectralMeasure& mu, const Eigen::VectorXd& v);

// Every atom or node has a partner at -xi carrying the conjugate form (within tol).
bool is_symmetric(const SpectralMeasure& mu, double tol = 1e-9);
// Index of the atom at -xi for every atom (or -1), frequencies matched within tol.
std::vector<long> antipodal_partners(const std::vector<Atom>& atoms, double tol);

// Every form PSD within -1e-10 * trace.
bool is_positive(const SpectralMeasure& mu);

// Factories.
SphereDensity isotropic_sphere(int d, double radius, const HermitianForm& form);
// Random wave: scalar, radius sqrt(d)/(2 pi), so Var Y = Var d_i Y = 1.
SphereDensity random_wave(int d);
double random_wave_radius(int d);
LebesgueDensity lebesgue_from_function(const Lattice& grid, int dim_target,
                                       const std::function<HermitianForm(const Eigen::VectorXd&)>& fn);
// Scalar density of the covariance exp(-|v|^2 / (2 s^2)) on R^d.
LebesgueDensity gaussian_covariance_density(int d, double s, int per_axis, double cutoff_sd = 8.0);

// Gradient jet: Sigma_Y(xi) -> Sigma_Y(xi) (x) a a^H, a = (1, 2 i pi xi), target
// index u * (1 + d) + j. Throws NumericalError if the second moment of the
// input is not finite.
AtomicMeasure jet_lift(const AtomicMeasure& psi);
LebesgueDensity jet_lift(const LebesgueDensity& psi);
SphereDensity jet_lift(const SphereDensity& psi);
SpectralMeasure jet_lift(const SpectralMeasure& psi);
Eigen::VectorXcd jet_vector(const Eigen::VectorXd& xi);

// Hessian jet of a scalar field F: rank-one form generated by
// [2 i pi xi, -(4 pi^2 / sqrt(2 beta)) (xi xi^T - (gamma/d) |xi|^2 I)], the
// matrix part in orthonormal Sym(V) coordinates (S_ii, then sqrt2 S_ij, i<j).
Eigen::VectorXcd hessian_jet_vector(const Eigen::VectorXd& xi, double beta, double gamma);
// Orthonormal Sym(V) coordinates of a symmetric matrix and back.
Eigen::VectorXd sym_coords(const Eigen::MatrixXd& s);
Eigen::MatrixXd sym_from_coords(const Eigen::VectorXd& c, int d);
SpectralMeasure hessian_jet_lift(const SpectralMeasure& omega, double beta, double gamma);

struct ConeTest {
  double max_violation = 0.0;
  double scale = 0.0;
  bool contained = true;
};
// max over atoms / nodes of Tr(Sigma f Sigma f) = |Sigma^{1/2} f Sigma^{1/2}|_F^2;
// contained iff max <= 1e-10 * scale, scale = max (Tr Sigma)^2 |f|_F^2.
ConeTest image_in_cone(const SpectralMeasure& mu, const Eigen::MatrixXcd& f);
ConeTest image_in_cone(const SpectralMeasure& mu, const SymTensor& f);

}  // namespace chaosvar
