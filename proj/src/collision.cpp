#include "conboltz/collision.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace conboltz {

CollisionWorkspace::CollisionWorkspace(GridPtr grid, KernelSpec spec, std::shared_ptr<const WeightTable> table)
    : grid_(std::move(grid)), spec_(std::move(spec)), table_(std::move(table)) {
  if (!grid_ || !table_) throw Error("collision workspace needs a grid and a weight table");
  if (spec_.dim() != grid_->dim()) throw Error("collision workspace: kernel and grid dimensions differ");
  if (table_->band() != collision_band(*grid_)) throw Error("collision workspace: table built for another grid");
  const int d = grid_->dim();
  norm_ = std::pow(2.0 * std::numbers::pi, -0.5 * d) * std::pow(grid_->mode_spacing(), d);
  const std::size_t B = table_->band_size();
  band_slot_.resize(B);
  const int n = grid_->n();
  for (std::size_t b = 0; b < B; ++b) {
    const auto k = table_->band_mode(b);
    std::array<int, 3> slot{0, 0, 0};
    for (int a = 0; a < d; ++a) slot[a] = k[a] < 0 ? k[a] + n : k[a];
    band_slot_[b] = grid_->flatten(slot);
  }
}

std::shared_ptr<const CollisionWorkspace> make_workspace(GridPtr grid, const KernelSpec& spec,
                                                         const TableOptions& options) {
  auto table = build_weight_table(*grid, spec, options);
  return std::make_shared<CollisionWorkspace>(std::move(grid), spec, std::move(table));
}

std::vector<cplx> CollisionWorkspace::q_hat(std::span<const cplx> g_hat) const {
  if (g_hat.size() != grid_->size()) throw Error("q_hat: coefficient array does not match the grid");
  const WeightTable& T = *table_;
  const std::size_t B = T.band_size();
  const int N = T.band();
  const int W = 2 * N + 1;
  const int d = grid_->dim();

  std::vector<double> gr(B), gi(B);
  for (std::size_t b = 0; b < B; ++b) {
    gr[b] = g_hat[band_slot_[b]].real();
    gi[b] = g_hat[band_slot_[b]].imag();
  }
  // Linear band index: idx(k - m) = idx(k) - idx(m) + idx(0).
  const long origin = static_cast<long>(T.band_index({0, 0, 0}));
  const bool full = T.mode() == TableMode::Full;
  const cplx* unique = T.unique_values().data();

  std::vector<cplx> out(grid_->size(), 0.0);
  const long count = static_cast<long>(B);
#pragma omp parallel for schedule(static)
  for (long kb = 0; kb < count; ++kb) {
    const auto k = T.band_mode(static_cast<std::size_t>(kb));
    std::array<int, 3> lo{0, 0, 0}, hi{0, 0, 0};
    for (int a = 0; a < d; ++a) {
      lo[a] = std::max(-N, k[a] - N);
      hi[a] = std::min(N, k[a] + N);
    }
    const cplx* row = full ? T.full_row(kb) : nullptr;
    const std::uint32_t* irow = full ? nullptr : T.index_row(kb);
    double ar = 0.0, ai = 0.0;
    const int m0_hi = hi[0], m1_lo = d == 3 ? lo[1] : 0, m1_hi = d == 3 ? hi[1] : 0;
    const int last = d - 1;
    for (int m0 = lo[0]; m0 <= m0_hi; ++m0) {
      for (int m1 = m1_lo; m1 <= m1_hi; ++m1) {
        long base = m0 + N;
        if (d == 3) base = base * W + (m1 + N);
        const long start = base * W + (lo[last] + N);
        const long stop = base * W + (hi[last] + N);
        for (long m = start; m <= stop; ++m) {
          const long j = kb - m + origin;
          const double pr = gr[j] * gr[m] - gi[j] * gi[m];
          const double pi = gr[j] * gi[m] + gi[j] * gr[m];
          const cplx w = full ? row[m] : unique[irow[m]];
          ar += pr * w.real() - pi * w.imag();
          ai += pr * w.imag() + pi * w.real();
        }
      }
    }
    out[band_slot_[kb]] = cplx(norm_ * ar, norm_ * ai);
  }
  return out;
}

std::vector<cplx> q_hat(std::span<const cplx> g_hat, const CollisionWorkspace& ws) { return ws.q_hat(g_hat); }

std::vector<double> q_u(const State& s, const CollisionWorkspace& ws) {
  if (!s.grid().same_as(ws.grid())) throw Error("q_u: state and workspace live on different grids");
  const auto qh = ws.q_hat(s.coeffs());
  std::vector<double> out(ws.grid().size());
  ws.grid().inverse_real(qh, out);
  return out;
}

}  // namespace conboltz
