#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace chaosvar {

struct QuadRule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre on [a, b].
QuadRule1D gauss_legendre(int m, double a = -1.0, double b = 1.0);

// Composite Gauss-Legendre on [a, b] split into `panels` equal panels.
double integrate_composite(const std::function<double(double)>& f, double a, double b,
                           int panels = 64, int order = 16);

// Directions on the unit sphere S^{d-1} with probability weights, d in {1,2,3}.
// d=1: {-1,+1}; d=2: n equiangular angles (offset by half a step);
// d=3: Gauss-Legendre in cos(theta) x trapezoid in phi, about n points in total.
struct SphereRule {
  std::vector<Eigen::VectorXd> directions;
  std::vector<double> weights;
};
SphereRule sphere_rule(int d, int n);

}  // namespace chaosvar
