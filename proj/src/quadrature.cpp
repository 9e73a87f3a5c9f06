#include "conboltz/quadrature.hpp"

#include <boost/math/special_functions/legendre.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace conboltz {

Rule1D gauss_legendre(int n) {
  if (n < 1) throw Error("gauss_legendre: need at least one node");
  auto zeros = boost::math::legendre_p_zeros<double>(n);  // nonnegative half
  std::sort(zeros.begin(), zeros.end());
  Rule1D r;
  r.nodes.reserve(n);
  r.weights.reserve(n);
  const auto weight = [n](double x) {
    const double dp = boost::math::legendre_p_prime(n, x);
    return 2.0 / ((1.0 - x * x) * dp * dp);
  };
  for (auto it = zeros.rbegin(); it != zeros.rend(); ++it) {
    if (*it == 0.0) continue;
    r.nodes.push_back(-*it);
    r.weights.push_back(weight(*it));
  }
  if (n % 2 == 1) {
    r.nodes.push_back(0.0);
    r.weights.push_back(weight(0.0));
  }
  for (double z : zeros) {
    if (z == 0.0) continue;
    r.nodes.push_back(z);
    r.weights.push_back(weight(z));
  }
  return r;
}

Rule1D gauss_legendre(int n, double a, double b) {
  Rule1D r = gauss_legendre(n);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    r.nodes[i] = mid + half * r.nodes[i];
    r.weights[i] *= half;
  }
  return r;
}

Rule1D gauss_chebyshev(int n) {
  if (n < 1) throw Error("gauss_chebyshev: need at least one node");
  Rule1D r;
  for (int j = 0; j < n; ++j) {
    r.nodes.push_back(-std::cos((2.0 * j + 1.0) * std::numbers::pi / (2.0 * n)));
    r.weights.push_back(std::numbers::pi / n);
  }
  return r;
}

double sphere_area(int dim) {
  switch (dim) {
    case 1: return 2.0;
    case 2: return 2.0 * std::numbers::pi;
    case 3: return 4.0 * std::numbers::pi;
    default: throw Error("sphere_area: unsupported dimension");
  }
}

namespace {

// Orthonormal e1, e2 completing a unit vector a.
void complete_frame(const Vec& a, Vec& e1, Vec& e2) {
  const Vec t = std::abs(a[0]) < 0.9 ? Vec{1.0, 0.0, 0.0} : Vec{0.0, 1.0, 0.0};
  const double proj = t[0] * a[0] + t[1] * a[1] + t[2] * a[2];
  e1 = {t[0] - proj * a[0], t[1] - proj * a[1], t[2] - proj * a[2]};
  const double n1 = std::sqrt(e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]);
  for (auto& x : e1) x /= n1;
  e2 = {a[1] * e1[2] - a[2] * e1[1], a[2] * e1[0] - a[0] * e1[2], a[0] * e1[1] - a[1] * e1[0]};
}

}  // namespace

SphereRule sphere_rule(int dim, int order, const Vec& axis) {
  if (order < 1) throw Error("sphere_rule: order must be positive");
  SphereRule s;
  if (dim == 2) {
    const double phi0 = std::atan2(axis[1], axis[0]);
    for (int j = 0; j < order; ++j) {
      const double phi = phi0 + 2.0 * std::numbers::pi * (j + 0.5) / order;
      s.nodes.push_back({std::cos(phi), std::sin(phi), 0.0});
      s.weights.push_back(2.0 * std::numbers::pi / order);
      s.cosines.push_back(std::cos(phi - phi0));
    }
    return s;
  }
  if (dim != 3) throw Error("sphere_rule: dimension must be 2 or 3");
  double na = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
  Vec a = na > 0.0 ? Vec{axis[0] / na, axis[1] / na, axis[2] / na} : Vec{0.0, 0.0, 1.0};
  Vec e1, e2;
  complete_frame(a, e1, e2);
  const Rule1D polar = gauss_legendre(order);
  const int naz = order;
  for (std::size_t p = 0; p < polar.nodes.size(); ++p) {
    const double c = polar.nodes[p];
    const double sn = std::sqrt(std::max(0.0, 1.0 - c * c));
    for (int j = 0; j < naz; ++j) {
      const double phi = 2.0 * std::numbers::pi * (j + 0.5) / naz;
      const double cp = std::cos(phi), sp = std::sin(phi);
      Vec v;
      for (int i = 0; i < 3; ++i) v[i] = c * a[i] + sn * (cp * e1[i] + sp * e2[i]);
      s.nodes.push_back(v);
      s.weights.push_back(polar.weights[p] * 2.0 * std::numbers::pi / naz);
      s.cosines.push_back(c);
    }
  }
  return s;
}

}  // namespace conboltz
