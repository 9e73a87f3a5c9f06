#pragma once

#include <vector>

#include "conboltz/grid.hpp"

namespace conboltz {

struct QuadratureError : Error {
  using Error::Error;
};

struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1].
Rule1D gauss_legendre(int n);
/// Gauss-Legendre rule mapped to [a, b].
Rule1D gauss_legendre(int n, double a, double b);
/// n-point Gauss-Chebyshev (first kind) nodes; weights pi/n for the
/// (1 - s^2)^{-1/2} weight.
Rule1D gauss_chebyshev(int n);

/// Quadrature on the unit sphere S^{d-1}. For d = 3 the polar axis is `axis`
/// and the nodes are GL in cos(theta) times uniform azimuth; `cosines` holds
/// axis . sigma per node. For d = 2 the rule is `order` uniform angles.
struct SphereRule {
  std::vector<Vec> nodes;
  std::vector<double> weights;
  std::vector<double> cosines;
};

SphereRule sphere_rule(int dim, int order, const Vec& axis = {0.0, 0.0, 1.0});

/// |S^{d-1}|
double sphere_area(int dim);

}  // namespace conboltz
