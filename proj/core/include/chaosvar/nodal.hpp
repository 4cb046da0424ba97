#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "chaosvar/field.hpp"
#include "chaosvar/test_function.hpp"

namespace chaosvar {

struct WindowResult {
  double value = 0.0;
  double lambda = 0.0;
  std::string functional;
  std::uint64_t seed = 0;
  long diagnostics = 0;  // degenerate cells, unresolved Newton seeds, tangencies
};

// Jet at one node: value[n], gradient[n * d] (component-major), gradient may be empty.
struct JetView {
  std::span<const double> value;
  std::span<const double> gradient;
};
using JetFunction = std::function<double(const JetView&)>;

// Quadrature of lambda^{-d/2} int phi(v / lambda) f(X(v)) dv on a fixed node set
// (d = 1: Simpson on [-R lambda, R lambda]; d = 2: midpoint cells), reusable
// across realizations of one model. Throws NumericalError if h > 1/(8 max|xi|).
class WindowQuadrature {
 public:
  WindowQuadrature(const FieldModel& model, const TestFunction& phi, double lambda, double h,
                   int jet_order = 0);
  WindowResult apply(const FieldRealization& real, const JetFunction& f,
                     const std::string& functional = "smoothed") const;
  std::size_t num_nodes() const { return weights_.size(); }
  const std::vector<Eigen::VectorXd>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  int d_, n_, jet_order_;
  double lambda_;
  std::vector<Eigen::VectorXd> nodes_;
  std::vector<double> weights_;
  std::unique_ptr<PointPhases> phases_;
};

WindowResult smoothed_functional(const FieldRealization& real, const JetFunction& f,
                                 const TestFunction& phi, double lambda, double h, int jet_order = 0);

struct ZeroCount {
  std::size_t count = 0;
  std::vector<double> roots;
  std::size_t tangencies = 0;
};

// Crossings of level u by the deriv_order-th derivative of one component on
// [a, b]: sign changes on the step grid (nodes within 1e-12 of u are replaced by
// half-step samples), each root refined to 1e-10. Throws NumericalError if
// step > 1/(8 max|xi|).
ZeroCount count_zeros_1d(const FieldRealization& real, double a, double b, double step, double u,
                         int component = 0, int deriv_order = 0);
// Same, with grid values from a precomputed phase matrix covering [x0, x0 + (n-1) h].
ZeroCount count_zeros_1d(const FieldRealization& real, const GridPhases1D& grid, double u,
                         int component = 0, int deriv_order = 0);

struct NodalLength {
  double length = 0.0;
  long degenerate_cells = 0;  // corner values exactly at the level
  long saddle_cells = 0;      // resolved by centre sampling
};

struct NodalLengthOptions {
  double u = 0.0;
  double x0 = 0.0, y0 = 0.0;  // coordinates of values(0, 0)
  // Exact field value at a point; used for saddle cells. Bilinear mean if empty.
  std::function<double(double, double)> center_value;
  // Segment weight at its midpoint; unit weight if empty.
  std::function<double(double, double)> weight;
};

// Marching squares on values (ny x nx, row = y) with linear interpolation on edges.
NodalLength nodal_length_2d(const Eigen::MatrixXd& values, double h, const NodalLengthOptions& opt = {});

struct CriticalPoints {
  std::vector<Eigen::VectorXd> points;
  long unresolved_cells = 0;
  std::size_t count() const { return points.size(); }
};

struct Window2D {
  double x0, x1, y0, y1;
};

// Critical points of a scalar field in the window. d = 2: seeds from cells where
// both partials change sign, Newton with the analytic Hessian (tolerance 1e-12),
// one subdivision on failure, duplicates merged within 1e-8. d = 1 uses
// count_zeros_1d on F' over [x0, x1].
CriticalPoints critical_points_count(const FieldRealization& real, const Window2D& window, double h);

enum class Observable { Zeros1D, Length2D, CriticalPoints };
std::string observable_name(Observable o);
Observable observable_from_name(const std::string& name);

// Z^u_lambda(phi) = lambda^{-d/2} int phi(v / lambda) dZ^u(v) for the given
// observable, with precomputed grids reused across realizations of one model.
class NodalWindow {
 public:
  NodalWindow(const FieldModel& model, const TestFunction& phi, double lambda, Observable obs, double h);
  WindowResult evaluate(const FieldRealization& real, double u) const;
  double h() const { return h_; }

 private:
  TestFunction phi_;
  double lambda_, h_, radius_;
  Observable obs_;
  std::unique_ptr<GridPhases1D> grid1_;
  std::unique_ptr<GridPhases2D> grid2_;
};

WindowResult windowed_nodal_functional(const FieldRealization& real, const TestFunction& phi,
                                       double lambda, Observable obs, double u, double h);

}  // namespace chaosvar
