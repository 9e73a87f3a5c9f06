#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace conboltz {

using cplx = std::complex<double>;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when a field handed to a transform carries NaN/Inf.
struct NonFiniteError : Error {
  NonFiniteError(const std::string& what, std::size_t node)
      : Error(what), node(node) {}
  std::size_t node;
};

using Vec = std::array<double, 3>;

class FftPlans;

/// Uniform cell-centred velocity grid on (-L, L)^d with the matching Fourier
/// lattice zeta_k = pi k / L, k in {-n/2, ..., n/2 - 1} per axis.
///
/// Field storage is row-major with axis 0 slowest. Coefficient arrays use the
/// FFT slot order: slot s holds the signed mode k = s for s < n/2 and s - n
/// otherwise, so slot n/2 is the (unpaired) Nyquist mode.
///
/// Immutable after construction; copies share the transform plans.
class VelocityGrid {
 public:
  VelocityGrid(int dim, double half_width, int n);

  int dim() const { return dim_; }
  double half_width() const { return L_; }
  int n() const { return n_; }
  double dv() const { return dv_; }
  std::size_t size() const { return size_; }
  double cell_volume() const { return cell_volume_; }
  double mode_spacing() const;

  double node(int i) const { return -L_ + (i + 0.5) * dv_; }
  static int signed_mode(int slot, int n) { return slot < n / 2 ? slot : slot - n; }
  int signed_mode(int slot) const { return signed_mode(slot, n_); }
  double wavenumber(int k) const;

  /// Per-axis indices of a flat node (or slot) index; unused axes are 0.
  std::array<int, 3> unflatten(std::size_t flat) const;
  std::size_t flatten(const std::array<int, 3>& idx) const;
  Vec velocity(std::size_t flat) const;
  Vec wavevector(std::size_t slot) const;
  bool is_nyquist_slot(std::size_t slot) const;

  /// g_hat(zeta_k) = (2 pi)^{-d/2} dv^d sum_j g(v_j) exp(-i zeta_k . v_j).
  void forward(std::span<const double> values, std::span<cplx> coeffs) const;
  /// Fourier series evaluated at the nodes; returns the complex field.
  void inverse(std::span<const cplx> coeffs, std::span<cplx> field) const;
  /// Real part of the inverse.
  void inverse_real(std::span<const cplx> coeffs, std::span<double> values) const;

  /// Fourier series of `coeffs` evaluated at an arbitrary point of Omega_L.
  double evaluate_series(std::span<const cplx> coeffs, const Vec& v) const;

  bool same_as(const VelocityGrid& other) const;

 private:
  int dim_;
  double L_;
  int n_;
  double dv_;
  std::size_t size_;
  double cell_volume_;
  double forward_scale_;
  double inverse_scale_;
  std::vector<cplx> phase_;  // exp(i pi k (1 - 1/n)) per slot
  std::shared_ptr<FftPlans> plans_;
};

using GridPtr = std::shared_ptr<const VelocityGrid>;

/// Distribution g on the grid at time t. Fourier coefficients are cached and
/// resynchronised lazily after the nodal values change.
class State {
 public:
  State(GridPtr grid, std::vector<double> values, double t = 0.0);
  explicit State(GridPtr grid);

  const VelocityGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  double time() const { return t_; }
  void set_time(double t) { t_ = t; }

  std::span<const double> values() const { return values_; }
  /// Mutable access; invalidates the cached coefficients.
  std::span<double> mutable_values();
  void assign(std::vector<double> values);

  bool synchronized() const { return synced_; }
  /// Forward transform of the values, computed on first use.
  std::span<const cplx> coeffs() const;

 private:
  GridPtr grid_;
  std::vector<double> values_;
  mutable std::vector<cplx> coeffs_;
  mutable bool synced_ = false;
  double t_ = 0.0;
};

std::vector<cplx> forward_transform(const State& s);

/// Pi^N: zero every coefficient with max_a |k_a| > n_keep.
State project(const State& s, int n_keep);

/// Spectral derivative D^order g (order is a per-axis multi-index). Odd-order
/// derivatives along an axis drop that axis' Nyquist mode.
std::vector<double> spectral_derivative(const State& s, const std::array<int, 3>& order);

/// Discrete H^alpha_k(Omega_L) norm: sum over multi-indices beta <= alpha of
/// ||D^beta g <v>^k||_2^2, derivatives taken spectrally.
double sobolev_norm(const State& s, const std::array<int, 3>& alpha, double k);

double l2_norm(const VelocityGrid& grid, std::span<const double> values);
double weighted_l2_norm(const VelocityGrid& grid, std::span<const double> values, double k);

struct DomainChoice {
  double half_width = 0.0;
  bool support_limited = false;  // the support radius, not the tail, set L
  double tail_ratio = 0.0;       // tail / (mu * reference) at the returned L
};

struct DomainRequest {
  int dim = 3;
  double mass = 1.0;
  Vec mean_velocity{0.0, 0.0, 0.0};
  double temperature = 1.0;
  double dilation = 1.0;        // C >= 1
  double tolerance = 1e-4;      // mu in (0, 1)
  double support_radius = 0.0;  // f0 is supported in the ball of this radius
};

/// Weighted tail of the controlling Maxwellian C M[m0,u0,T0] outside the cube
/// (-L, L)^d: integral of C M (1 + |v|^2) over the complement.
double maxwellian_tail(const DomainRequest& req, double half_width);

/// Smallest L with supp f0 inside Omega_L and
///   tail(L) <= mu * integral of M[m0,u0,T0] (1 + |v|^2).
DomainChoice choose_domain(const DomainRequest& req);

}  // namespace conboltz
