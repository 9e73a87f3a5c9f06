#pragma once

#include <cmath>
#include <memory>
#include <numbers>
#include <random>
#include <vector>

#include "conboltz/diagnostics.hpp"
#include "conboltz/grid.hpp"

namespace testing {

using namespace conboltz;

inline GridPtr grid(int d, double L, int n) { return std::make_shared<VelocityGrid>(d, L, n); }

inline std::vector<double> random_vector(std::size_t n, unsigned seed, double lo = -1.0, double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> x(n);
  for (auto& v : x) v = u(rng);
  return x;
}

// Equal-mass Gaussians centred at +-sep e_1.
inline State two_gaussian(const GridPtr& g, double sep = 1.0, double var = 2.0 / 3.0) {
  const State a = maxwellian(g, 0.5, {sep, 0.0, 0.0}, var);
  const State b = maxwellian(g, 0.5, {-sep, 0.0, 0.0}, var);
  std::vector<double> v(g->size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = a.values()[j] + b.values()[j];
  return State(g, std::move(v));
}

inline double l2(const GridPtr& g, const std::vector<double>& x) { return l2_norm(*g, x); }

inline double l2_diff(const GridPtr& g, std::span<const double> a, std::span<const double> b) {
  std::vector<double> d(a.size());
  for (std::size_t j = 0; j < d.size(); ++j) d[j] = a[j] - b[j];
  return l2_norm(*g, d);
}

}  // namespace testing
