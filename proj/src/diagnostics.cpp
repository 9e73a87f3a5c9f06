#include "conboltz/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace conboltz {

namespace {

double norm2(const Vec& v) { return v[0] * v[0] + v[1] * v[1] + v[2] * v[2]; }

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

Vec MomentSet::mean_velocity() const {
  if (mass == 0.0) return {0.0, 0.0, 0.0};
  return {momentum[0] / mass, momentum[1] / mass, momentum[2] / mass};
}

double MomentSet::temperature(int dim) const {
  if (mass == 0.0) return 0.0;
  return (energy / mass - norm2(mean_velocity())) / dim;
}

double max_relative_drift(const MomentSet& ref, const MomentSet& now, int dim, bool include_energy) {
  const double m0 = std::abs(ref.mass);
  const double p0 = m0 * std::sqrt(std::abs(ref.energy) / std::max(m0, 1e-300));
  double drift = std::abs(now.mass - ref.mass) / m0;
  for (int a = 0; a < dim; ++a) drift = std::max(drift, std::abs(now.momentum[a] - ref.momentum[a]) / p0);
  if (include_energy) drift = std::max(drift, std::abs(now.energy - ref.energy) / std::abs(ref.energy));
  return drift;
}

State maxwellian(GridPtr grid, double m0, const Vec& u0, double T0) {
  if (!(T0 > 0.0)) throw Error("maxwellian: temperature must be positive");
  if (!(m0 > 0.0)) throw Error("maxwellian: mass must be positive");
  const int d = grid->dim();
  const double c = m0 * std::pow(2.0 * std::numbers::pi * T0, -0.5 * d);
  std::vector<double> values(grid->size());
  for (std::size_t j = 0; j < values.size(); ++j) {
    const Vec v = grid->velocity(j);
    double r2 = 0.0;
    for (int a = 0; a < d; ++a) r2 += (v[a] - u0[a]) * (v[a] - u0[a]);
    values[j] = c * std::exp(-r2 / (2.0 * T0));
  }
  return State(std::move(grid), std::move(values));
}

State equilibrium_of(const State& s) {
  const MomentSet m = moments(s);
  const int d = s.grid().dim();
  return maxwellian(s.grid_ptr(), m.mass, m.mean_velocity(), m.temperature(d));
}

MomentSet moments(const State& s, double lambda, std::span<const double> orders) {
  const auto& grid = s.grid();
  const auto g = s.values();
  const double w = grid.cell_volume();
  MomentSet m;
  m.t = s.time();
  m.orders.assign(orders.begin(), orders.end());
  m.generalized.assign(orders.size(), 0.0);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const Vec v = grid.velocity(j);
    const double r2 = norm2(v);
    m.mass += g[j] * w;
    for (int a = 0; a < grid.dim(); ++a) m.momentum[a] += g[j] * v[a] * w;
    m.energy += g[j] * r2 * w;
    for (std::size_t i = 0; i < orders.size(); ++i)
      m.generalized[i] += std::abs(g[j]) * std::pow(r2, 0.5 * lambda * orders[i]) * w;
  }
  return m;
}

double generalized_moment(const State& s, double lambda, double k) {
  const double order[1] = {k};
  return moments(s, lambda, order).generalized[0];
}

double z_moment(const State& s, double lambda, int k) {
  if (k < 1) return 0.0;
  std::vector<double> orders(k + 1);
  for (int j = 0; j <= k; ++j) orders[j] = j;
  const auto m = moments(s, lambda, orders).generalized;
  double z = 0.0;
  for (int j = 0; j < k; ++j) z += binomial(k, j) * m[j + 1] * m[k - j];
  return z;
}

double negative_part_norm(const State& s) {
  double acc = 0.0;
  for (double x : s.values())
    if (x < 0.0) acc += x * x;
  return std::sqrt(acc * s.grid().cell_volume());
}

double entropy(const State& s) {
  double acc = 0.0;
  for (double x : s.values())
    if (x > 0.0) acc += x * std::log(x);
  return acc * s.grid().cell_volume();
}

ErrorNorms error_norms(const State& s, const State& ref, double k, const std::array<int, 3>& alpha) {
  if (!s.grid().same_as(ref.grid())) throw Error("error_norms: states live on different grids");
  std::vector<double> diff(s.values().size());
  for (std::size_t j = 0; j < diff.size(); ++j) diff[j] = s.values()[j] - ref.values()[j];
  ErrorNorms e;
  e.l2_k = weighted_l2_norm(s.grid(), diff, k);
  e.h_alpha_k = sobolev_norm(State(s.grid_ptr(), std::move(diff)), alpha, k);
  return e;
}

TailReport tail_moment_bound_check(const State& f, std::span<const double> q, double lambda, int k,
                                   double inner_half_width) {
  const auto& grid = f.grid();
  if (q.size() != grid.size()) throw Error("tail_moment_bound_check: field size mismatch");
  if (!(inner_half_width > 0.0 && inner_half_width < grid.half_width()))
    throw Error("tail_moment_bound_check: inner window must lie inside the domain");
  TailReport r;
  r.inner_half_width = inner_half_width;
  double outside = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const Vec v = grid.velocity(j);
    bool out = false;
    for (int a = 0; a < grid.dim(); ++a) out = out || std::abs(v[a]) >= inner_half_width;
    if (out) outside += q[j];
  }
  r.lhs = std::abs(outside * grid.cell_volume());
  std::vector<double> orders{0.0, static_cast<double>(k), static_cast<double>(k + 1)};
  const auto m = moments(f, lambda, orders).generalized;
  const double b_l1 = 1.0;  // Grad-cutoff normalisation
  const double z = z_moment(f, lambda, k);
  r.rhs = std::pow(inner_half_width, -lambda * k) * ((m[2] + m[1]) * m[0] + 2.0 * b_l1 * (m[2] * m[0] + z));
  r.ratio = r.rhs > 0.0 ? r.lhs / r.rhs : 0.0;
  return r;
}

}  // namespace conboltz
