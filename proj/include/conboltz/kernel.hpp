#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "conboltz/grid.hpp"
#include "conboltz/quadrature.hpp"

namespace conboltz {

/// Largest R / L for which a density supported in the ball of radius R / 2
/// picks up no periodic image: 4 / (3 + sqrt 2).
inline constexpr double alias_free_truncation = 4.0 / (3.0 + std::numbers::sqrt2);

struct BudgetError : Error {
  using Error::Error;
};

enum class Interaction { MaxwellMolecules, VariableHard, HardSpheres };

/// Collision kernel B(u, sigma) = |u|^lambda b(u_hat . sigma) with restitution
/// beta. The angular factor is either the normalised constant or samples of b
/// on `angular_nodes(dim, count)`, interpolated by barycentric Lagrange.
class KernelSpec {
 public:
  static KernelSpec isotropic(int dim, double lambda, double beta);

  int dim() const { return dim_; }
  double lambda() const { return lambda_; }
  double beta() const { return beta_; }
  bool is_isotropic() const { return isotropic_; }
  Interaction interaction() const;

  /// Velocity-truncation radius in units of the grid half-width L.
  double truncation() const { return truncation_; }
  KernelSpec with_truncation(double factor) const;

  /// b(s), s = cos(theta).
  double b(double s) const;
  std::span<const double> angular_nodes() const { return nodes_; }
  std::span<const double> angular_values() const { return values_; }
  /// |S^{d-2}| int b(s) (1 - s^2)^{(d-3)/2} ds
  double angular_integral() const;
  std::uint64_t angular_hash() const;

 private:
  friend KernelSpec normalize_angular(int, double, double, std::span<const double>);
  KernelSpec(int dim, double lambda, double beta);

  int dim_;
  double lambda_;
  double beta_;
  double truncation_ = alias_free_truncation;
  bool isotropic_ = true;
  std::vector<double> nodes_;
  std::vector<double> values_;
  std::vector<double> bary_;
};

/// Nodes on which tabulated angular samples live: GL on [-1, 1] for d = 3,
/// Gauss-Chebyshev for d = 2.
std::vector<double> angular_nodes(int dim, int count);

/// Scale raw samples b_raw (at angular_nodes(dim, b_raw.size())) to unit
/// sphere integral.
KernelSpec normalize_angular(int dim, double lambda, double beta, std::span<const double> b_raw);

/// G(u, zeta) = |u|^lambda int b(u_hat . sigma) (exp(-i beta/2 zeta.(|u| sigma - u)) - 1) dsigma.
/// Closed form for the isotropic kernel, sphere quadrature otherwise.
cplx weight_G(const Vec& u, const Vec& zeta, const KernelSpec& spec);
/// Same integral, always by sphere quadrature (doubled until stable).
cplx weight_G_quadrature(const Vec& u, const Vec& zeta, const KernelSpec& spec);

struct RadialQuadrature {
  int kronrod_points = 31;  // 15, 31 or 61
  double tolerance = 1e-10;  // relative to the entry bound 2 |S| R^(lambda+d) / (lambda+d)
  int max_depth = 18;
};

/// Fixed nested rule for anisotropic kernels.
struct NestedQuadrature {
  int radial_panels = 8;
  int radial_order = 16;
  int outer_order = 24;
  int inner_order = 24;
};

/// G_hat(xi, zeta) = int_{|u| <= R} G(u, zeta) exp(-i xi.u) du with
/// R = spec.truncation() * L.
cplx weight_G_hat(const Vec& xi, const Vec& zeta, const VelocityGrid& grid, const KernelSpec& spec,
                  const RadialQuadrature& rq = {}, const NestedQuadrature& nq = {});

/// Velocity-truncation radius used with this grid.
double truncation_radius(const VelocityGrid& grid, const KernelSpec& spec);

/// Largest mode magnitude kept by the collision band, |k|_inf <= n/2 - 1.
inline int collision_band(const VelocityGrid& grid) { return grid.n() / 2 - 1; }

enum class TableMode { Full, Reduced, Automatic };

struct TableOptions {
  TableMode mode = TableMode::Automatic;
  double memory_budget_mb = 1024.0;
  RadialQuadrature radial{};
  NestedQuadrature nested{};
  std::optional<std::filesystem::path> cache_dir;
};

/// Values of G_hat(zeta_m, zeta_k) for every pair of band modes (k, m).
/// Band modes are indexed b = ((k0 + N) W + (k1 + N)) W + (k2 + N) with
/// W = 2N + 1 (the third index is absent when d = 2).
class WeightTable {
 public:
  TableMode mode() const { return mode_; }
  int band() const { return band_; }
  std::size_t band_size() const { return band_size_; }
  std::size_t unique_entries() const { return unique_.size(); }
  bool loaded_from_cache() const { return from_cache_; }
  double umax() const { return umax_; }

  cplx at(std::size_t k, std::size_t m) const {
    const std::size_t p = k * band_size_ + m;
    return mode_ == TableMode::Full ? full_[p] : unique_[index_[p]];
  }
  /// Row k of the dense table (Full mode only).
  const cplx* full_row(std::size_t k) const { return full_.data() + k * band_size_; }
  /// Row k of unique-value indices (Reduced mode only).
  const std::uint32_t* index_row(std::size_t k) const { return index_.data() + k * band_size_; }
  std::span<const cplx> unique_values() const { return unique_; }

  std::array<int, 3> band_mode(std::size_t b) const;
  std::size_t band_index(const std::array<int, 3>& k) const;

 private:
  friend std::shared_ptr<const WeightTable> build_weight_table(const VelocityGrid&, const KernelSpec&,
                                                               const TableOptions&);
  TableMode mode_ = TableMode::Full;
  int dim_ = 3;
  int band_ = 0;
  std::size_t band_size_ = 0;
  double umax_ = 0.0;
  bool from_cache_ = false;
  std::vector<cplx> full_;
  std::vector<cplx> unique_;
  std::vector<std::uint32_t> index_;
};

std::size_t estimate_table_bytes(const VelocityGrid& grid, TableMode mode);

std::shared_ptr<const WeightTable> build_weight_table(const VelocityGrid& grid, const KernelSpec& spec,
                                                      const TableOptions& options = {});

/// Cache file name for a table built with these inputs.
std::string table_cache_name(const VelocityGrid& grid, const KernelSpec& spec, const TableOptions& options);
/// Removes every cached table in `dir`; returns the number of files deleted.
std::size_t clear_table_cache(const std::filesystem::path& dir);
/// $CONBOLTZ_CACHE_DIR, else ~/.cache/conboltz.
std::filesystem::path default_cache_dir();

}  // namespace conboltz
