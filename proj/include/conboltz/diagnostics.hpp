#pragma once

#include <array>
#include <span>
#include <vector>

#include "conboltz/grid.hpp"

namespace conboltz {

/// Midpoint-rule moments. `energy` is int |v|^2 g (no factor 1/2);
/// generalized[i] = m_{k_i} = int |g| |v|^{lambda k_i}.
struct MomentSet {
  double t = 0.0;
  double mass = 0.0;
  Vec momentum{0.0, 0.0, 0.0};
  double energy = 0.0;
  std::vector<double> orders;
  std::vector<double> generalized;

  Vec mean_velocity() const;
  /// (energy / mass - |u|^2) / d
  double temperature(int dim) const;
};

/// Largest change of the collision invariants between two samples, each
/// relative to its scale at `ref`: mass m0, momentum m0 sqrt(E0 / m0), energy E0.
double max_relative_drift(const MomentSet& ref, const MomentSet& now, int dim, bool include_energy = true);

/// M[m0, u0, T0] sampled at the nodes.
State maxwellian(GridPtr grid, double m0, const Vec& u0, double T0);
/// Maxwellian sharing the discrete mass, momentum and energy of s.
State equilibrium_of(const State& s);

MomentSet moments(const State& s, double lambda = 1.0, std::span<const double> orders = {});
/// m_k = int |g| |v|^{lambda k}
double generalized_moment(const State& s, double lambda, double k);
/// Z_k = sum_{j<k} C(k, j) m_{j+1} m_{k-j}
double z_moment(const State& s, double lambda, int k);

/// ||min(g, 0)||_2
double negative_part_norm(const State& s);
/// int g+ log g+
double entropy(const State& s);

struct ErrorNorms {
  double l2_k = 0.0;
  double h_alpha_k = 0.0;
};
ErrorNorms error_norms(const State& s, const State& ref, double k, const std::array<int, 3>& alpha);

struct TailReport {
  double inner_half_width = 0.0;
  double lhs = 0.0;  // |int over Omega_L minus Omega_L' of Q|
  double rhs = 0.0;  // L'^{-lambda k} ((m_{k+1} + m_k) m_0 + 2 ||b||_1 (m_{k+1} m_0 + Z_k))
  double ratio = 0.0;
};

/// Compares the collision output `q` outside the inner window (-L', L')^d with
/// the moment bound evaluated on f.
TailReport tail_moment_bound_check(const State& f, std::span<const double> q, double lambda, int k,
                                   double inner_half_width);

}  // namespace conboltz
