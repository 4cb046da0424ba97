#include "chaosvar/spectral_measure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "chaosvar/error.hpp"
#include "chaosvar/quadrature.hpp"

namespace chaosvar {

namespace {
constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
}  // namespace

int SphereDensity::dim_target() const {
  const int k = base_target();
  switch (lift.kind) {
    case SphereLift::Kind::None: return k;
    case SphereLift::Kind::Jet: return k * (1 + dim_freq);
    case SphereLift::Kind::HessianJet: return dim_freq + dim_freq * (dim_freq + 1) / 2;
  }
  return k;
}

HermitianForm SphereDensity::form_at(const Eigen::VectorXd& theta) const {
  if (profile.empty()) throw std::invalid_argument("SphereDensity: empty profile");
  std::size_t best = 0;
  if (profile.size() > 1) {
    double best_dot = -INFINITY;
    for (std::size_t i = 0; i < directions.size(); ++i) {
      const double dp = directions[i].dot(theta);
      if (dp > best_dot) {
        best_dot = dp;
        best = i;
      }
    }
  }
  const HermitianForm& base = profile[best];
  const Eigen::VectorXd xi = radius * theta;
  switch (lift.kind) {
    case SphereLift::Kind::None: return base;
    case SphereLift::Kind::Jet: return base.kron(HermitianForm::rank_one(jet_vector(xi)));
    case SphereLift::Kind::HessianJet:
      return HermitianForm::rank_one(hessian_jet_vector(xi, lift.beta, lift.gamma),
                                     base(0, 0).real());
  }
  return base;
}

std::size_t Lattice::size() const {
  std::size_t s = 1;
  for (int c : counts) s *= static_cast<std::size_t>(c);
  return s;
}

double Lattice::cell_volume() const { return spacing.prod(); }

Eigen::VectorXd Lattice::node(std::size_t flat) const {
  const int d = dim();
  Eigen::VectorXd x(d);
  for (int j = d - 1; j >= 0; --j) {
    const std::size_t i = flat % counts[j];
    flat /= counts[j];
    x(j) = lower(j) + (static_cast<double>(i) + 0.5) * spacing(j);
  }
  return x;
}

Lattice Lattice::symmetric_box(int d, double half_width, int per_axis) {
  Lattice g;
  g.lower = Eigen::VectorXd::Constant(d, -half_width);
  g.spacing = Eigen::VectorXd::Constant(d, 2.0 * half_width / per_axis);
  g.counts.assign(d, per_axis);
  return g;
}

int dim_freq(const SpectralMeasure& mu) {
  return std::visit(overloaded{[](const AtomicMeasure& m) { return m.dim_freq; },
                               [](const SphereDensity& m) { return m.dim_freq; },
                               [](const LebesgueDensity& m) { return m.dim_freq(); }},
                    mu);
}

int dim_target(const SpectralMeasure& mu) {
  return std::visit(overloaded{[](const AtomicMeasure& m) { return m.dim_target; },
                               [](const SphereDensity& m) { return m.dim_target(); },
                               [](const LebesgueDensity& m) { return m.dim_target; }},
                    mu);
}

std::vector<Atom> quadrature_atoms(const SpectralMeasure& mu) {
  return std::visit(
      overloaded{
          [](const AtomicMeasure& m) { return m.atoms; },
          [](const SphereDensity& m) {
            int n = m.quad_nodes;
            if (n <= 0) n = m.dim_freq == 2 ? 4096 : 8192;
            const SphereRule rule = sphere_rule(m.dim_freq, n);
            std::vector<Atom> atoms;
            atoms.reserve(rule.weights.size());
            for (std::size_t i = 0; i < rule.weights.size(); ++i)
              atoms.push_back({m.radius * rule.directions[i],
                               rule.weights[i] * m.form_at(rule.directions[i])});
            return atoms;
          },
          [](const LebesgueDensity& m) {
            const double vol = m.grid.cell_volume();
            std::vector<Atom> atoms;
            atoms.reserve(m.values.size());
            for (std::size_t i = 0; i < m.values.size(); ++i)
              atoms.push_back({m.grid.node(i), vol * m.values[i]});
            return atoms;
          }},
      mu);
}

HermitianForm total_mass(const SpectralMeasure& mu) {
  return HermitianForm(covariance_eval(mu, Eigen::VectorXd::Zero(dim_freq(mu))), 1e-9);
}

Eigen::MatrixXcd covariance_eval(const SpectralMeasure& mu, const Eigen::VectorXd& v) {
  if (v.size() != dim_freq(mu)) throw std::invalid_argument("covariance_eval: dimension of v");
  const int n = dim_target(mu);
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(n, n);
  for (const Atom& a : quadrature_atoms(mu)) {
    const double ph = 2.0 * kPi * a.freq.dot(v);
    acc += cdouble(std::cos(ph), std::sin(ph)) * a.form.matrix();
  }
  return acc;
}

// Sorted sweep on the first coordinate.
std::vector<long> antipodal_partners(const std::vector<Atom>& atoms, double tol) {
  const std::size_t n = atoms.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return atoms[a].freq(0) < atoms[b].freq(0); });
  std::vector<double> keys(n);
  for (std::size_t i = 0; i < n; ++i) keys[i] = atoms[order[i]].freq(0);
  std::vector<long> partner(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::VectorXd target = -atoms[i].freq;
    auto lo = std::lower_bound(keys.begin(), keys.end(), target(0) - tol);
    for (auto it = lo; it != keys.end() && *it <= target(0) + tol; ++it) {
      const std::size_t j = order[static_cast<std::size_t>(it - keys.begin())];
      if ((atoms[j].freq - target).cwiseAbs().maxCoeff() <= tol) {
        partner[i] = static_cast<long>(j);
        break;
      }
    }
  }
  return partner;
}

bool is_symmetric(const SpectralMeasure& mu, double tol) {
  const std::vector<Atom> atoms = quadrature_atoms(mu);
  const std::vector<long> partner = antipodal_partners(atoms, tol);
  double scale = 0.0;
  for (const Atom& a : atoms) scale = std::max(scale, a.form.matrix().cwiseAbs().maxCoeff());
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (partner[i] < 0) return false;
    const HermitianForm& f = atoms[static_cast<std::size_t>(partner[i])].form;
    if (max_abs_diff(f, atoms[i].form.conj()) > 1e-9 * std::max(scale, 1e-300)) return false;
  }
  return true;
}

bool is_positive(const SpectralMeasure& mu) {
  for (const Atom& a : quadrature_atoms(mu))
    if (!a.form.is_psd()) return false;
  return true;
}

SphereDensity isotropic_sphere(int d, double radius, const HermitianForm& form) {
  if (d < 1 || d > 3) throw std::invalid_argument("isotropic_sphere: d in {1,2,3}");
  if (!(radius > 0.0)) throw std::invalid_argument("isotropic_sphere: radius > 0");
  SphereDensity s;
  s.dim_freq = d;
  s.radius = radius;
  s.directions = {Eigen::VectorXd::Unit(d, 0)};
  s.profile = {form};
  return s;
}

double random_wave_radius(int d) { return std::sqrt(static_cast<double>(d)) / (2.0 * kPi); }

SphereDensity random_wave(int d) {
  return isotropic_sphere(d, random_wave_radius(d), HermitianForm::scalar(1.0));
}

LebesgueDensity lebesgue_from_function(
    const Lattice& grid, int dim_target,
    const std::function<HermitianForm(const Eigen::VectorXd&)>& fn) {
  LebesgueDensity m;
  m.dim_target = dim_target;
  m.grid = grid;
  m.values.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    HermitianForm f = fn(grid.node(i));
    if (f.dim() != dim_target) throw std::invalid_argument("lebesgue_from_function: form dim");
    m.values.push_back(std::move(f));
  }
  return m;
}

LebesgueDensity gaussian_covariance_density(int d, double s, int per_axis, double cutoff_sd) {
  const double sd = 1.0 / (2.0 * kPi * s);
  const double norm = std::pow(2.0 * kPi * s * s, 0.5 * d);
  return lebesgue_from_function(
      Lattice::symmetric_box(d, cutoff_sd * sd, per_axis), 1, [&](const Eigen::VectorXd& xi) {
        return HermitianForm::scalar(norm * std::exp(-2.0 * kPi * kPi * s * s * xi.squaredNorm()));
      });
}

Eigen::VectorXcd jet_vector(const Eigen::VectorXd& xi) {
  const int d = static_cast<int>(xi.size());
  Eigen::VectorXcd a(1 + d);
  a(0) = 1.0;
  for (int j = 0; j < d; ++j) a(1 + j) = cdouble(0.0, 2.0 * kPi * xi(j));
  return a;
}

namespace {
void check_second_moment(const std::vector<Atom>& atoms) {
  double m2 = 0.0;
  for (const Atom& a : atoms) m2 += a.freq.squaredNorm() * std::abs(a.form.trace());
  if (!std::isfinite(m2)) throw NumericalError("jet_lift: second moment is not finite");
}
}  // namespace

AtomicMeasure jet_lift(const AtomicMeasure& psi) {
  check_second_moment(psi.atoms);
  AtomicMeasure out;
  out.dim_freq = psi.dim_freq;
  out.dim_target = psi.dim_target * (1 + psi.dim_freq);
  out.atoms.reserve(psi.atoms.size());
  for (const Atom& a : psi.atoms)
    out.atoms.push_back({a.freq, a.form.kron(HermitianForm::rank_one(jet_vector(a.freq)))});
  return out;
}

LebesgueDensity jet_lift(const LebesgueDensity& psi) {
  check_second_moment(quadrature_atoms(psi));
  LebesgueDensity out;
  out.grid = psi.grid;
  out.dim_target = psi.dim_target * (1 + psi.dim_freq());
  out.values.reserve(psi.values.size());
  for (std::size_t i = 0; i < psi.values.size(); ++i)
    out.values.push_back(psi.values[i].kron(HermitianForm::rank_one(jet_vector(psi.grid.node(i)))));
  return out;
}

SphereDensity jet_lift(const SphereDensity& psi) {
  if (psi.lift.kind != SphereLift::Kind::None)
    throw std::invalid_argument("jet_lift: sphere density already lifted");
  SphereDensity out = psi;
  out.lift.kind = SphereLift::Kind::Jet;
  return out;
}

SpectralMeasure jet_lift(const SpectralMeasure& psi) {
  return std::visit([](const auto& m) { return SpectralMeasure(jet_lift(m)); }, psi);
}

Eigen::VectorXd sym_coords(const Eigen::MatrixXd& s) {
  const int d = static_cast<int>(s.rows());
  Eigen::VectorXd c(d * (d + 1) / 2);
  int k = 0;
  for (int i = 0; i < d; ++i) c(k++) = s(i, i);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) c(k++) = std::numbers::sqrt2 * s(i, j);
  return c;
}

Eigen::MatrixXd sym_from_coords(const Eigen::VectorXd& c, int d) {
  Eigen::MatrixXd s(d, d);
  int k = 0;
  for (int i = 0; i < d; ++i) s(i, i) = c(k++);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) s(i, j) = s(j, i) = c(k++) / std::numbers::sqrt2;
  return s;
}

Eigen::VectorXcd hessian_jet_vector(const Eigen::VectorXd& xi, double beta, double gamma) {
  if (!(beta > 0.0)) throw std::invalid_argument("hessian_jet_vector: beta must be > 0");
  const int d = static_cast<int>(xi.size());
  const int m = d * (d + 1) / 2;
  Eigen::VectorXcd a(d + m);
  for (int j = 0; j < d; ++j) a(j) = cdouble(0.0, 2.0 * kPi * xi(j));
  Eigen::MatrixXd s = xi * xi.transpose();
  s.diagonal().array() -= (gamma / d) * xi.squaredNorm();
  const Eigen::VectorXd c = -(4.0 * kPi * kPi / std::sqrt(2.0 * beta)) * sym_coords(s);
  for (int j = 0; j < m; ++j) a(d + j) = c(j);
  return a;
}

SpectralMeasure hessian_jet_lift(const SpectralMeasure& omega, double beta, double gamma) {
  if (!(beta > 0.0)) throw std::invalid_argument("hessian_jet_lift: beta must be > 0");
  if (dim_target(omega) != 1) throw std::invalid_argument("hessian_jet_lift: scalar measure required");
  return std::visit(
      overloaded{
          [&](const AtomicMeasure& m) -> SpectralMeasure {
            AtomicMeasure out;
            out.dim_freq = m.dim_freq;
            out.dim_target = m.dim_freq + m.dim_freq * (m.dim_freq + 1) / 2;
            for (const Atom& a : m.atoms)
              out.atoms.push_back({a.freq, HermitianForm::rank_one(
                                               hessian_jet_vector(a.freq, beta, gamma),
                                               a.form(0, 0).real())});
            return out;
          },
          [&](const SphereDensity& m) -> SpectralMeasure {
            if (m.lift.kind != SphereLift::Kind::None)
              throw std::invalid_argument("hessian_jet_lift: sphere density already lifted");
            SphereDensity out = m;
            out.lift = {SphereLift::Kind::HessianJet, beta, gamma};
            return out;
          },
          [&](const LebesgueDensity& m) -> SpectralMeasure {
            LebesgueDensity out;
            const int d = m.dim_freq();
            out.grid = m.grid;
            out.dim_target = d + d * (d + 1) / 2;
            for (std::size_t i = 0; i < m.values.size(); ++i)
              out.values.push_back(HermitianForm::rank_one(
                  hessian_jet_vector(m.grid.node(i), beta, gamma), m.values[i](0, 0).real()));
            return out;
          }},
      omega);
}

ConeTest image_in_cone(const SpectralMeasure& mu, const Eigen::MatrixXcd& f) {
  const int n = dim_target(mu);
  if (f.rows() != n || f.cols() != n) throw std::invalid_argument("image_in_cone: form dimension");
  const double fnorm2 = f.squaredNorm();
  ConeTest r;
  for (const Atom& a : quadrature_atoms(mu)) {
    const Eigen::MatrixXcd sf = a.form.matrix() * f;
    const double v = (sf * sf).trace().real();
    const double tr = a.form.trace();
    r.max_violation = std::max(r.max_violation, v);
    r.scale = std::max(r.scale, tr * tr * fnorm2);
  }
  r.contained = r.max_violation <= 1e-10 * r.scale;
  return r;
}

ConeTest image_in_cone(const SpectralMeasure& mu, const SymTensor& f) {
  if (f.order() != 2) throw std::invalid_argument("image_in_cone: order-2 tensor required");
  return image_in_cone(mu, Eigen::MatrixXcd(f.to_matrix().cast<cdouble>()));
}

}  // namespace chaosvar
