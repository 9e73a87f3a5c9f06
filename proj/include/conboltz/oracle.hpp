#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

#include "conboltz/grid.hpp"
#include "conboltz/kernel.hpp"

namespace conboltz {

struct QuadratureSpec {
  int sphere_order = 16;  // GL points in cos(theta); azimuth uses as many
  int stride = 1;         // subsample of the w-grid per axis
};

/// Direct evaluation of Q(f, f) on the grid nodes.
///
/// beta = 1: strong form. Gain samples f at v', w' by multilinear
/// interpolation (zero outside Omega_L and beyond the last node), loss is
/// exact on the grid. beta < 1: weak form against nodal hat functions.
///
/// The *_weak fields are int Q phi for phi = 1, v, |v|^2 evaluated with the
/// exact test function at each post-collision velocity that stays in
/// Omega_L, so they carry no interpolation bias.
struct OracleResult {
  std::vector<double> field;
  double mass_weak = 0.0;
  Vec momentum_weak{0.0, 0.0, 0.0};
  double energy_weak = 0.0;
};

OracleResult collision_direct(const State& f, const KernelSpec& spec, const QuadratureSpec& q = {});

/// argmin ||qu - x||_2 subject to C x = 0, from the dense KKT system.
std::vector<double> nearest_conservative_dense(std::span<const double> qu, const Eigen::MatrixXd& C);

}  // namespace conboltz
