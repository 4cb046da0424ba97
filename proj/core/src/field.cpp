#include "chaosvar/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "chaosvar/error.hpp"
#include "chaosvar/rng.hpp"

namespace chaosvar {

namespace {
constexpr double kPi = std::numbers::pi;

double trace_mass(const std::vector<Atom>& atoms) {
  double m = 0.0;
  for (const Atom& a : atoms) m += a.form.trace();
  return m;
}

AtomicMeasure discretize_sphere(const SphereDensity& s, int n) {
  if (s.dim_freq > 3 || s.dim_freq < 1)
    throw std::invalid_argument("discretize: sphere strategy supports d <= 3");
  std::vector<Eigen::VectorXd> half;
  if (s.dim_freq == 1) {
    half.push_back(Eigen::VectorXd::Constant(1, 1.0));
  } else if (s.dim_freq == 2) {
    // directions j and j + n/2 are antipodal
    for (int j = 0; j < n / 2; ++j) {
      const double t = 2.0 * kPi * (j + 0.5) / n;
      Eigen::VectorXd v(2);
      v << std::cos(t), std::sin(t);
      half.push_back(v);
    }
  } else {
    const int m = n / 2;
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < m; ++i) {
      const double z = 1.0 - (2.0 * i + 1.0) / m;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double ph = golden * i;
      Eigen::VectorXd v(3);
      v << r * std::cos(ph), r * std::sin(ph), z;
      half.push_back(v);
    }
  }
  const double w = 1.0 / (2.0 * static_cast<double>(half.size()));
  AtomicMeasure out;
  out.dim_freq = s.dim_freq;
  out.dim_target = s.dim_target();
  for (const auto& t : half) {
    const HermitianForm f = w * s.form_at(t);
    out.atoms.push_back({s.radius * t, f});
    out.atoms.push_back({-s.radius * t, f.conj()});
  }
  return out;
}

LebesgueDensity resample(const LebesgueDensity& l, int n_atoms) {
  const int d = l.dim_freq();
  const int per_axis = static_cast<int>(std::lround(std::pow(n_atoms, 1.0 / d)));
  long total = 1;
  for (int j = 0; j < d; ++j) total *= per_axis;
  if (total != n_atoms)
    throw std::invalid_argument("discretize: n_atoms must be a perfect d-th power for grid resampling");
  Lattice g;
  g.counts.assign(d, per_axis);
  g.lower = l.grid.lower;
  g.spacing.resize(d);
  for (int j = 0; j < d; ++j) g.spacing(j) = l.grid.spacing(j) * l.grid.counts[j] / per_axis;
  LebesgueDensity out;
  out.dim_target = l.dim_target;
  out.grid = g;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Eigen::VectorXd x = g.node(i);
    // multilinear interpolation between source cell centres, clamped at the edges
    std::vector<int> i0(d);
    std::vector<double> t(d);
    for (int j = 0; j < d; ++j) {
      const double u = (x(j) - l.grid.lower(j)) / l.grid.spacing(j) - 0.5;
      const int c = l.grid.counts[j];
      const double uc = std::clamp(u, 0.0, static_cast<double>(c - 1));
      i0[j] = std::min(static_cast<int>(std::floor(uc)), std::max(c - 2, 0));
      t[j] = c > 1 ? uc - i0[j] : 0.0;
    }
    HermitianForm acc = HermitianForm::zero(l.dim_target);
    for (int corner = 0; corner < (1 << d); ++corner) {
      double w = 1.0;
      std::size_t flat = 0;
      for (int j = 0; j < d; ++j) {
        const int bit = (corner >> j) & 1;
        const int idx = std::min(i0[j] + bit, l.grid.counts[j] - 1);
        w *= bit ? t[j] : 1.0 - t[j];
        flat = flat * l.grid.counts[j] + idx;
      }
      if (w != 0.0) acc += w * l.values[flat];
    }
    out.values.push_back(acc);
  }
  return out;
}

}  // namespace

AtomicMeasure discretize(const SpectralMeasure& psi, const DiscretizationSpec& spec) {
  if (spec.n_atoms < 0 || spec.n_atoms % 2 != 0)
    throw std::invalid_argument("discretize: n_atoms must be even");
  switch (spec.strategy) {
    case DiscretizationSpec::Strategy::NativeAtomic:
      if (const auto* a = std::get_if<AtomicMeasure>(&psi)) return *a;
      throw std::invalid_argument("discretize: native-atomic strategy needs an atomic measure");
    case DiscretizationSpec::Strategy::SphereEquiangular: {
      const auto* s = std::get_if<SphereDensity>(&psi);
      if (!s) throw std::invalid_argument("discretize: sphere strategy needs a sphere density");
      if (spec.n_atoms < 2) throw std::invalid_argument("discretize: n_atoms >= 2 required");
      return discretize_sphere(*s, spec.n_atoms);
    }
    case DiscretizationSpec::Strategy::GridQuadrature: {
      const auto* l = std::get_if<LebesgueDensity>(&psi);
      if (!l) throw std::invalid_argument("discretize: grid strategy needs a Lebesgue density");
      const std::vector<Atom> src = quadrature_atoms(*l);
      LebesgueDensity g = spec.n_atoms > 0 ? resample(*l, spec.n_atoms) : *l;
      AtomicMeasure out;
      out.dim_freq = g.dim_freq();
      out.dim_target = g.dim_target;
      out.atoms = quadrature_atoms(g);
      const double m0 = trace_mass(src), m1 = trace_mass(out.atoms);
      if (m1 > 0.0)
        for (Atom& a : out.atoms) a.form *= m0 / m1;
      return out;
    }
  }
  throw std::invalid_argument("discretize: unknown strategy");
}

FieldModel::FieldModel(const AtomicMeasure& mu, std::string id)
    : dim_freq_(mu.dim_freq), dim_target_(mu.dim_target), id_(std::move(id)) {
  const double tol = 1e-9;
  const std::vector<long> partner = antipodal_partners(mu.atoms, tol);
  double scale = 0.0;
  for (const Atom& a : mu.atoms) scale = std::max(scale, a.form.matrix().cwiseAbs().maxCoeff());
  std::vector<Eigen::VectorXd> fr;
  Eigen::MatrixXd zero_form = Eigen::MatrixXd::Zero(dim_target_, dim_target_);
  bool has_zero = false;
  for (std::size_t i = 0; i < mu.atoms.size(); ++i) {
    const Atom& a = mu.atoms[i];
    if (a.freq.cwiseAbs().maxCoeff() <= tol) {
      if (!a.form.is_real(1e-9)) throw NumericalError("sample_field: form at the origin is not real");
      zero_form += a.form.matrix().real();
      has_zero = true;
      continue;
    }
    if (partner[i] < 0) throw NumericalError("sample_field: atomic measure is not symmetric");
    const Atom& b = mu.atoms[static_cast<std::size_t>(partner[i])];
    if (max_abs_diff(b.form, a.form.conj()) > 1e-9 * std::max(scale, 1e-300))
      throw NumericalError("sample_field: partner forms are not conjugate");
    int k = 0;
    while (k < a.freq.size() && std::abs(a.freq(k)) <= tol) ++k;
    if (a.freq(k) < 0.0) continue;  // the partner carries this pair
    fr.push_back(a.freq);
    mixes_.push_back(a.form.psd_sqrt());
    zero_freq_.push_back(false);
  }
  if (has_zero) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(zero_form);
    const double tr = std::max(std::abs(zero_form.trace()), 1e-300);
    if (es.eigenvalues()(0) < -1e-10 * tr) throw NumericalError("psd_sqrt: form is not positive semi-definite");
    Eigen::MatrixXd L = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
    fr.push_back(Eigen::VectorXd::Zero(dim_freq_));
    mixes_.push_back(L.cast<cdouble>());
    zero_freq_.push_back(true);
  }
  freqs_.resize(dim_freq_, static_cast<Eigen::Index>(fr.size()));
  for (std::size_t k = 0; k < fr.size(); ++k) freqs_.col(static_cast<Eigen::Index>(k)) = fr[k];
}

double FieldModel::max_frequency() const {
  return freqs_.cols() == 0 ? 0.0 : freqs_.colwise().norm().maxCoeff();
}

double FieldModel::min_frequency_gap() const {
  const Eigen::Index K = freqs_.cols();
  double best = INFINITY;
  for (Eigen::Index i = 0; i < K; ++i) {
    for (Eigen::Index j = 0; j < K; ++j) {
      if (i != j) best = std::min(best, (freqs_.col(i) - freqs_.col(j)).norm());
      if (!zero_freq_[i] && !zero_freq_[j]) best = std::min(best, (freqs_.col(i) + freqs_.col(j)).norm());
    }
  }
  return best;
}

FieldRealization::FieldRealization(std::shared_ptr<const FieldModel> model, std::uint64_t seed)
    : model_(std::move(model)), seed_(seed) {
  const int n = model_->dim_target();
  const int K = model_->num_terms();
  Rng rng(seed);
  a_.resize(n, K);
  b_.resize(n, K);
  coeffs_.resize(n, K);
  for (int k = 0; k < K; ++k) {
    for (int i = 0; i < n; ++i) a_(i, k) = standard_normal(rng);
    for (int i = 0; i < n; ++i) b_(i, k) = standard_normal(rng);
    if (model_->zero_freq_[k]) {
      coeffs_.col(k) = model_->mixes_[k] * a_.col(k).cast<cdouble>();
    } else {
      Eigen::VectorXcd z(n);
      for (int i = 0; i < n; ++i) z(i) = cdouble(a_(i, k), b_(i, k));
      coeffs_.col(k) = std::numbers::sqrt2 * (model_->mixes_[k] * z);
    }
  }
}

namespace {
Eigen::VectorXcd phases(const Eigen::MatrixXd& freqs, const Eigen::VectorXd& v) {
  const Eigen::VectorXd th = 2.0 * kPi * (freqs.transpose() * v);
  Eigen::VectorXcd e(th.size());
  for (Eigen::Index k = 0; k < th.size(); ++k) e(k) = cdouble(std::cos(th(k)), std::sin(th(k)));
  return e;
}
}  // namespace

Eigen::VectorXd FieldRealization::value(const Eigen::VectorXd& v) const {
  return (coeffs_ * phases(model_->freqs(), v)).real();
}

Eigen::MatrixXd FieldRealization::gradient(const Eigen::VectorXd& v) const {
  const Eigen::MatrixXd& fr = model_->freqs();
  const Eigen::VectorXcd e = phases(fr, v);
  Eigen::MatrixXd g(coeffs_.rows(), fr.rows());
  for (Eigen::Index j = 0; j < fr.rows(); ++j) {
    const Eigen::VectorXcd ej = e.cwiseProduct((cdouble(0.0, 2.0 * kPi) * fr.row(j).transpose()).eval());
    g.col(j) = (coeffs_ * ej).real();
  }
  return g;
}

Eigen::MatrixXd FieldRealization::hessian(const Eigen::VectorXd& v, int component) const {
  const Eigen::MatrixXd& fr = model_->freqs();
  const Eigen::VectorXcd e = phases(fr, v);
  const Eigen::Index d = fr.rows();
  Eigen::MatrixXd h(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i; j < d; ++j) {
      cdouble s = 0.0;
      for (Eigen::Index k = 0; k < fr.cols(); ++k)
        s += coeffs_(component, k) * e(k) * (-4.0 * kPi * kPi * fr(i, k) * fr(j, k));
      h(i, j) = h(j, i) = s.real();
    }
  }
  return h;
}

FieldRealization sample_field(const AtomicMeasure& atomic, std::uint64_t seed) {
  return FieldRealization(std::make_shared<const FieldModel>(atomic), seed);
}

std::vector<JetPoint> eval_jet(const FieldRealization& real, std::span<const Eigen::VectorXd> points,
                               int order) {
  if (order < 0 || order > 2) throw std::invalid_argument("eval_jet: order in {0,1,2}");
  std::vector<JetPoint> out;
  out.reserve(points.size());
  const int n = real.model().dim_target();
  for (const auto& p : points) {
    JetPoint j;
    j.value = real.value(p);
    if (order >= 1) j.gradient = real.gradient(p);
    if (order >= 2)
      for (int c = 0; c < n; ++c) j.hessian.push_back(real.hessian(p, c));
    out.push_back(std::move(j));
  }
  return out;
}

namespace {
// Real and imaginary parts of c_k * (2 i pi xi_{k,axis})^order for one component.
void scaled_coeffs(const FieldRealization& real, const Eigen::MatrixXd& freqs, int component,
                   int axis, int order, Eigen::VectorXd& cr, Eigen::VectorXd& ci) {
  Eigen::VectorXcd c = real.coeffs().row(component).transpose();
  if (order > 0) {
    for (Eigen::Index k = 0; k < c.size(); ++k) c(k) *= std::pow(cdouble(0.0, 2.0 * kPi * freqs(axis, k)), order);
  }
  cr = c.real();
  ci = c.imag();
}

void check_model(const FieldRealization& real, const Eigen::MatrixXd& freqs) {
  if (real.model().freqs().cols() != freqs.cols() || real.model().freqs() != freqs)
    throw std::invalid_argument("phase matrix built for a different field model");
}
}  // namespace

PointPhases::PointPhases(const FieldModel& model, std::span<const Eigen::VectorXd> points)
    : freqs_(model.freqs()) {
  const Eigen::Index P = static_cast<Eigen::Index>(points.size());
  re_.resize(P, freqs_.cols());
  im_.resize(P, freqs_.cols());
  for (Eigen::Index p = 0; p < P; ++p) {
    const Eigen::VectorXd th = 2.0 * kPi * (freqs_.transpose() * points[p]);
    re_.row(p) = th.array().cos().matrix().transpose();
    im_.row(p) = th.array().sin().matrix().transpose();
  }
}

Eigen::MatrixXd PointPhases::evaluate(const FieldRealization& real, int deriv) const {
  check_model(real, freqs_);
  Eigen::MatrixXcd c = real.coeffs();
  if (deriv >= 0) {
    for (Eigen::Index k = 0; k < c.cols(); ++k) c.col(k) *= cdouble(0.0, 2.0 * kPi * freqs_(deriv, k));
  }
  const Eigen::MatrixXd cr = c.real().transpose(), ci = c.imag().transpose();
  return re_ * cr - im_ * ci;
}

GridPhases2D::GridPhases2D(const FieldModel& model, double x0, double y0, double h, int nx, int ny)
    : freqs_(model.freqs()), x0_(x0), y0_(y0), h_(h) {
  if (model.dim_freq() != 2) throw std::invalid_argument("GridPhases2D: d = 2 required");
  const Eigen::Index K = freqs_.cols();
  xr_.resize(nx, K);
  xi_.resize(nx, K);
  yr_.resize(ny, K);
  yi_.resize(ny, K);
  for (int i = 0; i < nx; ++i)
    for (Eigen::Index k = 0; k < K; ++k) {
      const double t = 2.0 * kPi * freqs_(0, k) * (x0 + i * h);
      xr_(i, k) = std::cos(t);
      xi_(i, k) = std::sin(t);
    }
  for (int j = 0; j < ny; ++j)
    for (Eigen::Index k = 0; k < K; ++k) {
      const double t = 2.0 * kPi * freqs_(1, k) * (y0 + j * h);
      yr_(j, k) = std::cos(t);
      yi_(j, k) = std::sin(t);
    }
}

Eigen::MatrixXd GridPhases2D::evaluate(const FieldRealization& real, int component, int deriv) const {
  check_model(real, freqs_);
  Eigen::VectorXd cr, ci;
  scaled_coeffs(real, freqs_, component, std::max(deriv, 0), deriv >= 0 ? 1 : 0, cr, ci);
  // A = Ey diag(c); Y = Re(A Ex^T)
  const Eigen::MatrixXd ar = yr_ * cr.asDiagonal() - yi_ * ci.asDiagonal();
  const Eigen::MatrixXd ai = yr_ * ci.asDiagonal() + yi_ * cr.asDiagonal();
  Eigen::MatrixXd out = ar * xr_.transpose();
  out.noalias() -= ai * xi_.transpose();
  return out;
}

GridPhases1D::GridPhases1D(const FieldModel& model, double x0, double h, int n)
    : freqs_(model.freqs()), x0_(x0), h_(h) {
  if (model.dim_freq() != 1) throw std::invalid_argument("GridPhases1D: d = 1 required");
  const Eigen::Index K = freqs_.cols();
  re_.resize(n, K);
  im_.resize(n, K);
  for (int i = 0; i < n; ++i)
    for (Eigen::Index k = 0; k < K; ++k) {
      const double t = 2.0 * kPi * freqs_(0, k) * (x0 + i * h);
      re_(i, k) = std::cos(t);
      im_(i, k) = std::sin(t);
    }
}

Eigen::VectorXd GridPhases1D::evaluate(const FieldRealization& real, int component, int deriv_order) const {
  check_model(real, freqs_);
  Eigen::VectorXd cr, ci;
  scaled_coeffs(real, freqs_, component, 0, deriv_order, cr, ci);
  return re_ * cr - im_ * ci;
}

}  // namespace chaosvar
