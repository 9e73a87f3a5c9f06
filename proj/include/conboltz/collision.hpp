#pragma once

#include <memory>
#include <span>
#include <vector>

#include "conboltz/grid.hpp"
#include "conboltz/kernel.hpp"

namespace conboltz {

/// Everything the spectral collision operator needs for one grid and kernel.
/// Immutable once built; q_hat allocates its own scratch so a workspace can
/// be shared by concurrent callers.
class CollisionWorkspace {
 public:
  CollisionWorkspace(GridPtr grid, KernelSpec spec, std::shared_ptr<const WeightTable> table);

  const VelocityGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  const KernelSpec& spec() const { return spec_; }
  const WeightTable& table() const { return *table_; }
  /// (2 pi)^{-d/2} (pi/L)^d: continuum prefactor times the mode-cell volume.
  double normalization() const { return norm_; }

  /// Q_hat on the full FFT slot layout; modes outside the band are zero.
  std::vector<cplx> q_hat(std::span<const cplx> g_hat) const;

 private:
  GridPtr grid_;
  KernelSpec spec_;
  std::shared_ptr<const WeightTable> table_;
  double norm_;
  std::vector<std::size_t> band_slot_;  // band index -> FFT slot
};

std::shared_ptr<const CollisionWorkspace> make_workspace(GridPtr grid, const KernelSpec& spec,
                                                         const TableOptions& options = {});

std::vector<cplx> q_hat(std::span<const cplx> g_hat, const CollisionWorkspace& ws);

/// Q_u(g) = Pi^N(Q(Eg, Eg) 1_{Omega_L}) at the nodes.
std::vector<double> q_u(const State& s, const CollisionWorkspace& ws);

}  // namespace conboltz
