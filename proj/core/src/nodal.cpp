#include "chaosvar/nodal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>

#include <boost/math/tools/toms748_solve.hpp>

#include "chaosvar/error.hpp"
#include "chaosvar/stats.hpp"

namespace chaosvar {

namespace {
constexpr double kPi = std::numbers::pi;

void check_resolution(const FieldModel& model, double h, const char* who) {
  const double fmax = model.max_frequency();
  if (!(h > 0.0) || (fmax > 0.0 && h > 1.0 / (8.0 * fmax) * (1.0 + 1e-12)))
    throw NumericalError(std::string(who) + ": step " + std::to_string(h) +
                         " does not resolve the maximal frequency (need h <= 1/(8 max|xi|))");
}

// x -> d^order/dx^order of one component of a d = 1 realization.
class ScalarEval {
 public:
  ScalarEval(const FieldRealization& real, int component, int order) {
    const Eigen::MatrixXd& fr = real.model().freqs();
    freq_ = fr.row(0).transpose();
    c_ = real.coeffs().row(component).transpose();
    for (Eigen::Index k = 0; k < c_.size(); ++k)
      if (order > 0) c_(k) *= std::pow(cdouble(0.0, 2.0 * kPi * freq_(k)), order);
  }
  double operator()(double x) const {
    double s = 0.0;
    for (Eigen::Index k = 0; k < c_.size(); ++k) {
      const double t = 2.0 * kPi * freq_(k) * x;
      s += c_(k).real() * std::cos(t) - c_(k).imag() * std::sin(t);
    }
    return s;
  }

 private:
  Eigen::VectorXd freq_;
  Eigen::VectorXcd c_;
};

double refine_root(const ScalarEval& f, double u, double lo, double hi, double flo, double fhi) {
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  std::uintmax_t iters = 200;
  auto g = [&](double x) { return f(x) - u; };
  auto tol = [](double a, double b) { return std::abs(b - a) <= 1e-10; };
  const auto r = boost::math::tools::toms748_solve(g, lo, hi, flo, fhi, tol, iters);
  return 0.5 * (r.first + r.second);
}

ZeroCount zeros_from_samples(const ScalarEval& f, const Eigen::VectorXd& values, double x0, double h,
                             double u, double a, double b) {
  struct Sample {
    double x, fx;
  };
  std::vector<Sample> s;
  s.reserve(static_cast<std::size_t>(values.size()) + 8);
  ZeroCount out;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const double x = x0 + static_cast<double>(i) * h;
    const double fx = values(i) - u;
    if (std::abs(fx) >= 1e-12) {
      s.push_back({x, fx});
      continue;
    }
    // suspected tangency or node on the level: halve the step around the node
    const double l = f(x - 0.5 * h) - u, r = f(x + 0.5 * h) - u;
    if ((l < 0.0) == (r < 0.0)) ++out.tangencies;
    s.push_back({x - 0.5 * h, l});
    s.push_back({x + 0.5 * h, r});
  }
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    if ((s[i].fx < 0.0) == (s[i + 1].fx < 0.0)) continue;
    const double root = refine_root(f, u, s[i].x, s[i + 1].x, s[i].fx, s[i + 1].fx);
    if (root >= a && root <= b) out.roots.push_back(root);
  }
  out.count = out.roots.size();
  return out;
}

}  // namespace

WindowQuadrature::WindowQuadrature(const FieldModel& model, const TestFunction& phi, double lambda,
                                   double h, int jet_order)
    : d_(model.dim_freq()), n_(model.dim_target()), jet_order_(jet_order), lambda_(lambda) {
  if (phi.dim() != d_) throw std::invalid_argument("WindowQuadrature: test function dimension");
  if (jet_order < 0 || jet_order > 1) throw std::invalid_argument("WindowQuadrature: jet order 0 or 1");
  if (!(lambda > 0.0)) throw std::invalid_argument("WindowQuadrature: lambda > 0");
  check_resolution(model, h, "smoothed_functional");
  const double R = phi.support_radius() * lambda;
  const double scale = std::pow(lambda, -0.5 * d_);
  if (d_ == 1) {
    int N = 2 * static_cast<int>(std::ceil(R / h));
    const double hh = 2.0 * R / N;
    for (int i = 0; i <= N; ++i) {
      const double x = -R + i * hh;
      const double w = (i == 0 || i == N) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      const double wt = scale * phi.value_radial(std::abs(x) / lambda) * w * hh / 3.0;
      if (wt == 0.0) continue;
      nodes_.push_back(Eigen::VectorXd::Constant(1, x));
      weights_.push_back(wt);
    }
  } else if (d_ == 2) {
    const int N = static_cast<int>(std::ceil(2.0 * R / h));
    const double hh = 2.0 * R / N;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        Eigen::VectorXd v(2);
        v << -R + (j + 0.5) * hh, -R + (i + 0.5) * hh;
        const double wt = scale * phi.value(v / lambda) * hh * hh;
        if (wt == 0.0) continue;
        nodes_.push_back(v);
        weights_.push_back(wt);
      }
  } else {
    throw std::invalid_argument("WindowQuadrature: d in {1, 2}");
  }
  phases_ = std::make_unique<PointPhases>(model, nodes_);
}

WindowResult WindowQuadrature::apply(const FieldRealization& real, const JetFunction& f,
                                     const std::string& functional) const {
  const Eigen::MatrixXd vals = phases_->evaluate(real);  // P x n
  std::vector<Eigen::MatrixXd> grads;
  if (jet_order_ >= 1)
    for (int j = 0; j < d_; ++j) grads.push_back(phases_->evaluate(real, j));
  std::vector<double> terms(weights_.size());
  std::vector<double> v(n_), g(jet_order_ >= 1 ? n_ * d_ : 0);
  for (std::size_t p = 0; p < weights_.size(); ++p) {
    const Eigen::Index pi = static_cast<Eigen::Index>(p);
    for (int c = 0; c < n_; ++c) v[c] = vals(pi, c);
    if (jet_order_ >= 1)
      for (int c = 0; c < n_; ++c)
        for (int j = 0; j < d_; ++j) g[c * d_ + j] = grads[j](pi, c);
    terms[p] = weights_[p] * f(JetView{v, g});
  }
  WindowResult r;
  r.value = pairwise_sum(terms);
  r.lambda = lambda_;
  r.functional = functional;
  r.seed = real.seed();
  return r;
}

WindowResult smoothed_functional(const FieldRealization& real, const JetFunction& f,
                                 const TestFunction& phi, double lambda, double h, int jet_order) {
  WindowQuadrature wq(real.model(), phi, lambda, h, jet_order);
  return wq.apply(real, f);
}

ZeroCount count_zeros_1d(const FieldRealization& real, double a, double b, double step, double u,
                         int component, int deriv_order) {
  if (real.model().dim_freq() != 1) throw std::invalid_argument("count_zeros_1d: d = 1 required");
  if (!(b > a)) throw std::invalid_argument("count_zeros_1d: empty interval");
  check_resolution(real.model(), step, "count_zeros_1d");
  const int n = static_cast<int>(std::ceil((b - a) / step)) + 1;
  const double h = (b - a) / (n - 1);
  GridPhases1D grid(real.model(), a, h, n);
  return count_zeros_1d(real, grid, u, component, deriv_order);
}

ZeroCount count_zeros_1d(const FieldRealization& real, const GridPhases1D& grid, double u,
                         int component, int deriv_order) {
  check_resolution(real.model(), grid.h(), "count_zeros_1d");
  const ScalarEval f(real, component, deriv_order);
  const Eigen::VectorXd vals = grid.evaluate(real, component, deriv_order);
  const double a = grid.x0(), b = grid.x0() + (grid.size() - 1) * grid.h();
  return zeros_from_samples(f, vals, grid.x0(), grid.h(), u, a, b);
}

NodalLength nodal_length_2d(const Eigen::MatrixXd& values, double h, const NodalLengthOptions& opt) {
  NodalLength out;
  const Eigen::Index ny = values.rows(), nx = values.cols();
  const double u = opt.u;
  std::vector<double> seg;
  seg.reserve(static_cast<std::size_t>(nx));
  std::vector<double> rows;
  rows.reserve(static_cast<std::size_t>(ny));
  for (Eigen::Index i = 0; i + 1 < ny; ++i) {
    seg.clear();
    const double y = opt.y0 + static_cast<double>(i) * h;
    for (Eigen::Index j = 0; j + 1 < nx; ++j) {
      const double x = opt.x0 + static_cast<double>(j) * h;
      const double v00 = values(i, j) - u, v10 = values(i, j + 1) - u;
      const double v11 = values(i + 1, j + 1) - u, v01 = values(i + 1, j) - u;
      if (v00 == 0.0 || v10 == 0.0 || v11 == 0.0 || v01 == 0.0) {
        ++out.degenerate_cells;
        continue;
      }
      const bool s00 = v00 > 0, s10 = v10 > 0, s11 = v11 > 0, s01 = v01 > 0;
      const int npos = s00 + s10 + s11 + s01;
      if (npos == 0 || npos == 4) continue;
      // crossing points on the edges, in cell-local units
      auto lerp = [](double a, double b) { return a / (a - b); };
      double ex[4], ey[4];
      bool has[4] = {s00 != s10, s10 != s11, s01 != s11, s00 != s01};
      if (has[0]) { ex[0] = lerp(v00, v10); ey[0] = 0.0; }
      if (has[1]) { ex[1] = 1.0; ey[1] = lerp(v10, v11); }
      if (has[2]) { ex[2] = lerp(v01, v11); ey[2] = 1.0; }
      if (has[3]) { ex[3] = 0.0; ey[3] = lerp(v00, v01); }
      int pairs[2][2];
      int npairs = 0;
      if (has[0] && has[1] && has[2] && has[3]) {
        ++out.saddle_cells;
        const double c = opt.center_value ? opt.center_value(x + 0.5 * h, y + 0.5 * h) - u
                                          : 0.25 * (v00 + v10 + v11 + v01);
        if ((c > 0) == s00) {
          // s00 and s11 are connected through the centre: cut off corners 10 and 01
          pairs[0][0] = 0; pairs[0][1] = 1;
          pairs[1][0] = 2; pairs[1][1] = 3;
        } else {
          pairs[0][0] = 0; pairs[0][1] = 3;
          pairs[1][0] = 1; pairs[1][1] = 2;
        }
        npairs = 2;
      } else {
        int k = 0;
        for (int e = 0; e < 4; ++e)
          if (has[e]) pairs[0][k++] = e;
        npairs = 1;
      }
      for (int p = 0; p < npairs; ++p) {
        const int a = pairs[p][0], b = pairs[p][1];
        const double dx = (ex[a] - ex[b]) * h, dy = (ey[a] - ey[b]) * h;
        double len = std::sqrt(dx * dx + dy * dy);
        if (opt.weight) len *= opt.weight(x + 0.5 * (ex[a] + ex[b]) * h, y + 0.5 * (ey[a] + ey[b]) * h);
        seg.push_back(len);
      }
    }
    rows.push_back(pairwise_sum(seg));
  }
  out.length = pairwise_sum(rows);
  return out;
}

namespace {

bool newton_2d(const FieldRealization& real, Eigen::VectorXd& v) {
  for (int it = 0; it < 60; ++it) {
    const Eigen::Vector2d g = real.gradient(v).row(0).transpose();
    const Eigen::Matrix2d H = real.hessian(v, 0);
    const double det = H.determinant();
    if (!std::isfinite(det) || std::abs(det) < 1e-300) return false;
    const Eigen::Vector2d step = H.inverse() * g;
    v -= step;
    if (!v.allFinite()) return false;
    if (step.norm() <= 1e-12 * (1.0 + v.norm())) return true;
  }
  return false;
}

void dedupe(std::vector<Eigen::VectorXd>& pts, double radius) {
  std::sort(pts.begin(), pts.end(), [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return a(0) < b(0) || (a(0) == b(0) && a(a.size() - 1) < b(b.size() - 1));
  });
  std::vector<Eigen::VectorXd> out;
  for (const auto& p : pts) {
    bool dup = false;
    for (std::size_t k = out.size(); k-- > 0;) {
      if (p(0) - out[k](0) > radius) break;
      if ((p - out[k]).norm() <= radius) {
        dup = true;
        break;
      }
    }
    if (!dup) out.push_back(p);
  }
  pts.swap(out);
}

CriticalPoints critical_points_on_grid(const FieldRealization& real, const Eigen::MatrixXd& gx,
                                       const Eigen::MatrixXd& gy, double x0, double y0, double h,
                                       const Window2D& w) {
  CriticalPoints out;
  auto changes = [](double a, double b, double c, double d) {
    const double lo = std::min({a, b, c, d}), hi = std::max({a, b, c, d});
    return lo <= 0.0 && hi >= 0.0;
  };
  auto inside_cell = [&](const Eigen::VectorXd& v, double cx, double cy, double margin) {
    return v(0) >= cx - margin && v(0) <= cx + h + margin && v(1) >= cy - margin && v(1) <= cy + h + margin;
  };
  for (Eigen::Index i = 0; i + 1 < gx.rows(); ++i) {
    for (Eigen::Index j = 0; j + 1 < gx.cols(); ++j) {
      if (!changes(gx(i, j), gx(i, j + 1), gx(i + 1, j), gx(i + 1, j + 1))) continue;
      if (!changes(gy(i, j), gy(i, j + 1), gy(i + 1, j), gy(i + 1, j + 1))) continue;
      const double cx = x0 + static_cast<double>(j) * h, cy = y0 + static_cast<double>(i) * h;
      Eigen::VectorXd v(2);
      v << cx + 0.5 * h, cy + 0.5 * h;
      bool found = false;
      if (newton_2d(real, v)) {
        if (v(0) >= w.x0 && v(0) <= w.x1 && v(1) >= w.y0 && v(1) <= w.y1) out.points.push_back(v);
        found = inside_cell(v, cx, cy, 0.5 * h);
      }
      if (!found) {
        for (int s = 0; s < 4 && !found; ++s) {
          Eigen::VectorXd q(2);
          q << cx + (0.25 + 0.5 * (s & 1)) * h, cy + (0.25 + 0.5 * (s >> 1)) * h;
          if (newton_2d(real, q)) {
            if (q(0) >= w.x0 && q(0) <= w.x1 && q(1) >= w.y0 && q(1) <= w.y1) out.points.push_back(q);
            found = inside_cell(q, cx, cy, 0.5 * h);
          }
        }
        if (!found) ++out.unresolved_cells;
      }
    }
  }
  dedupe(out.points, 1e-8);
  return out;
}

}  // namespace

CriticalPoints critical_points_count(const FieldRealization& real, const Window2D& window, double h) {
  const FieldModel& m = real.model();
  if (m.dim_target() != 1) throw std::invalid_argument("critical_points_count: scalar field required");
  check_resolution(m, h, "critical_points_count");
  if (m.dim_freq() == 1) {
    const ZeroCount z = count_zeros_1d(real, window.x0, window.x1, h, 0.0, 0, 1);
    CriticalPoints out;
    for (double r : z.roots) out.points.push_back(Eigen::VectorXd::Constant(1, r));
    return out;
  }
  if (m.dim_freq() != 2) throw std::invalid_argument("critical_points_count: d in {1, 2}");
  const int nx = static_cast<int>(std::ceil((window.x1 - window.x0) / h)) + 1;
  const int ny = static_cast<int>(std::ceil((window.y1 - window.y0) / h)) + 1;
  GridPhases2D grid(m, window.x0, window.y0, h, nx, ny);
  return critical_points_on_grid(real, grid.evaluate(real, 0, 0), grid.evaluate(real, 0, 1),
                                 window.x0, window.y0, h, window);
}

std::string observable_name(Observable o) {
  switch (o) {
    case Observable::Zeros1D: return "zeros-1d";
    case Observable::Length2D: return "length-2d";
    case Observable::CriticalPoints: return "critical-pts";
  }
  return "?";
}

Observable observable_from_name(const std::string& name) {
  if (name == "zeros-1d") return Observable::Zeros1D;
  if (name == "length-2d") return Observable::Length2D;
  if (name == "critical-pts") return Observable::CriticalPoints;
  throw ConfigError("unknown observable '" + name + "'");
}

NodalWindow::NodalWindow(const FieldModel& model, const TestFunction& phi, double lambda, Observable obs,
                         double h)
    : phi_(phi), lambda_(lambda), h_(h), obs_(obs) {
  const int d = model.dim_freq();
  if (phi.dim() != d) throw std::invalid_argument("NodalWindow: test function dimension");
  check_resolution(model, h, "windowed_nodal_functional");
  radius_ = phi.support_radius() * lambda;
  const int n = static_cast<int>(std::ceil(2.0 * radius_ / h)) + 1;
  h_ = 2.0 * radius_ / (n - 1);
  if (obs == Observable::Zeros1D) {
    if (d != 1) throw std::invalid_argument("zeros-1d needs d = 1");
    grid1_ = std::make_unique<GridPhases1D>(model, -radius_, h_, n);
  } else if (obs == Observable::Length2D) {
    if (d != 2) throw std::invalid_argument("length-2d needs d = 2");
    grid2_ = std::make_unique<GridPhases2D>(model, -radius_, -radius_, h_, n, n);
  } else {
    if (d == 1) grid1_ = std::make_unique<GridPhases1D>(model, -radius_, h_, n);
    else if (d == 2) grid2_ = std::make_unique<GridPhases2D>(model, -radius_, -radius_, h_, n, n);
    else throw std::invalid_argument("critical-pts needs d in {1, 2}");
  }
}

WindowResult NodalWindow::evaluate(const FieldRealization& real, double u) const {
  WindowResult r;
  r.lambda = lambda_;
  r.seed = real.seed();
  r.functional = observable_name(obs_);
  const int d = real.model().dim_freq();
  const double scale = std::pow(lambda_, -0.5 * d);
  std::vector<double> terms;
  if (grid1_) {
    const ZeroCount z = count_zeros_1d(real, *grid1_, u, 0, obs_ == Observable::Zeros1D ? 0 : 1);
    for (double x : z.roots) terms.push_back(scale * phi_.value_radial(std::abs(x) / lambda_));
    r.diagnostics = static_cast<long>(z.tangencies);
  } else if (obs_ == Observable::Length2D) {
    NodalLengthOptions opt;
    opt.u = u;
    opt.x0 = opt.y0 = -radius_;
    opt.center_value = [&real](double x, double y) { return real.value(Eigen::Vector2d(x, y))(0); };
    opt.weight = [this, scale](double x, double y) {
      return scale * phi_.value_radial(std::hypot(x, y) / lambda_);
    };
    const NodalLength len = nodal_length_2d(grid2_->evaluate(real, 0, -1), h_, opt);
    terms.push_back(len.length);
    r.diagnostics = len.degenerate_cells;
  } else {
    const Window2D w{-radius_, radius_, -radius_, radius_};
    const CriticalPoints cp = critical_points_on_grid(real, grid2_->evaluate(real, 0, 0),
                                                      grid2_->evaluate(real, 0, 1), -radius_, -radius_, h_, w);
    for (const auto& p : cp.points) terms.push_back(scale * phi_.value(p / lambda_));
    r.diagnostics = cp.unresolved_cells;
  }
  r.value = pairwise_sum(terms);
  return r;
}

WindowResult windowed_nodal_functional(const FieldRealization& real, const TestFunction& phi,
                                       double lambda, Observable obs, double u, double h) {
  NodalWindow w(real.model(), phi, lambda, obs, h);
  return w.evaluate(real, u);
}

}  // namespace chaosvar
