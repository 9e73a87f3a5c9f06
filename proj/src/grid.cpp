#include "conboltz/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>

namespace conboltz {

namespace {

// FFTW's planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

class FftPlans {
 public:
  FftPlans(int dim, int n) {
    std::vector<int> dims(dim, n);
    std::size_t total = 1;
    for (int a = 0; a < dim; ++a) total *= static_cast<std::size_t>(n);
    std::vector<fftw_complex> in(total), out(total);
    std::lock_guard lock(planner_mutex());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fwd_ = fftw_plan_dft(dim, dims.data(), in.data(), out.data(), FFTW_FORWARD, flags);
    bwd_ = fftw_plan_dft(dim, dims.data(), in.data(), out.data(), FFTW_BACKWARD, flags);
    if (fwd_ == nullptr || bwd_ == nullptr) throw Error("FFTW planning failed");
  }
  ~FftPlans() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
  }
  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;

  void forward(cplx* in, cplx* out) const {
    fftw_execute_dft(fwd_, reinterpret_cast<fftw_complex*>(in), reinterpret_cast<fftw_complex*>(out));
  }
  void backward(cplx* in, cplx* out) const {
    fftw_execute_dft(bwd_, reinterpret_cast<fftw_complex*>(in), reinterpret_cast<fftw_complex*>(out));
  }

 private:
  fftw_plan fwd_ = nullptr;
  fftw_plan bwd_ = nullptr;
};

VelocityGrid::VelocityGrid(int dim, double half_width, int n)
    : dim_(dim), L_(half_width), n_(n) {
  if (dim != 2 && dim != 3) throw Error("grid dimension must be 2 or 3");
  if (!(half_width > 0.0) || !std::isfinite(half_width)) throw Error("grid half-width must be positive");
  if (n < 8 || n % 2 != 0) throw Error("points per axis must be even and >= 8");
  dv_ = 2.0 * L_ / n_;
  size_ = 1;
  for (int a = 0; a < dim_; ++a) size_ *= static_cast<std::size_t>(n_);
  cell_volume_ = std::pow(dv_, dim_);
  forward_scale_ = std::pow(2.0 * std::numbers::pi, -0.5 * dim_) * cell_volume_;
  inverse_scale_ = std::pow(2.0 * std::numbers::pi, 0.5 * dim_) / std::pow(2.0 * L_, dim_);
  phase_.resize(n_);
  for (int s = 0; s < n_; ++s) {
    const int k = signed_mode(s);
    phase_[s] = std::polar(1.0, std::numbers::pi * k * (1.0 - 1.0 / n_));
  }
  plans_ = std::make_shared<FftPlans>(dim_, n_);
}

double VelocityGrid::mode_spacing() const { return std::numbers::pi / L_; }

double VelocityGrid::wavenumber(int k) const { return std::numbers::pi * k / L_; }

std::array<int, 3> VelocityGrid::unflatten(std::size_t flat) const {
  std::array<int, 3> idx{0, 0, 0};
  for (int a = dim_ - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(flat % n_);
    flat /= n_;
  }
  return idx;
}

std::size_t VelocityGrid::flatten(const std::array<int, 3>& idx) const {
  std::size_t flat = 0;
  for (int a = 0; a < dim_; ++a) flat = flat * n_ + static_cast<std::size_t>(idx[a]);
  return flat;
}

Vec VelocityGrid::velocity(std::size_t flat) const {
  const auto idx = unflatten(flat);
  Vec v{0.0, 0.0, 0.0};
  for (int a = 0; a < dim_; ++a) v[a] = node(idx[a]);
  return v;
}

Vec VelocityGrid::wavevector(std::size_t slot) const {
  const auto idx = unflatten(slot);
  Vec z{0.0, 0.0, 0.0};
  for (int a = 0; a < dim_; ++a) z[a] = wavenumber(signed_mode(idx[a]));
  return z;
}

bool VelocityGrid::is_nyquist_slot(std::size_t slot) const {
  const auto idx = unflatten(slot);
  for (int a = 0; a < dim_; ++a)
    if (idx[a] == n_ / 2) return true;
  return false;
}

void VelocityGrid::forward(std::span<const double> values, std::span<cplx> coeffs) const {
  if (values.size() != size_ || coeffs.size() != size_) throw Error("forward: size mismatch");
  std::vector<cplx> in(size_);
  for (std::size_t j = 0; j < size_; ++j) {
    if (!std::isfinite(values[j])) {
      std::ostringstream os;
      os << "non-finite value " << values[j] << " at node " << j;
      throw NonFiniteError(os.str(), j);
    }
    in[j] = values[j];
  }
  plans_->forward(in.data(), coeffs.data());
  for (std::size_t s = 0; s < size_; ++s) {
    const auto idx = unflatten(s);
    cplx ph = forward_scale_;
    for (int a = 0; a < dim_; ++a) ph *= phase_[idx[a]];
    coeffs[s] *= ph;
  }
}

void VelocityGrid::inverse(std::span<const cplx> coeffs, std::span<cplx> field) const {
  if (coeffs.size() != size_ || field.size() != size_) throw Error("inverse: size mismatch");
  std::vector<cplx> in(size_);
  for (std::size_t s = 0; s < size_; ++s) {
    const auto idx = unflatten(s);
    cplx ph = inverse_scale_;
    for (int a = 0; a < dim_; ++a) ph *= std::conj(phase_[idx[a]]);
    in[s] = coeffs[s] * ph;
  }
  plans_->backward(in.data(), field.data());
}

void VelocityGrid::inverse_real(std::span<const cplx> coeffs, std::span<double> values) const {
  std::vector<cplx> field(size_);
  inverse(coeffs, field);
  if (values.size() != size_) throw Error("inverse: size mismatch");
  for (std::size_t j = 0; j < size_; ++j) values[j] = field[j].real();
}

double VelocityGrid::evaluate_series(std::span<const cplx> coeffs, const Vec& v) const {
  if (coeffs.size() != size_) throw Error("evaluate_series: size mismatch");
  for (int a = 0; a < dim_; ++a)
    if (std::abs(v[a]) >= L_) return 0.0;
  // Separable phases exp(i zeta_k v_a) per axis.
  std::vector<std::vector<cplx>> axis(dim_, std::vector<cplx>(n_));
  for (int a = 0; a < dim_; ++a)
    for (int s = 0; s < n_; ++s) axis[a][s] = std::polar(1.0, wavenumber(signed_mode(s)) * v[a]);
  cplx acc = 0.0;
  for (std::size_t s = 0; s < size_; ++s) {
    const auto idx = unflatten(s);
    cplx e = 1.0;
    for (int a = 0; a < dim_; ++a) e *= axis[a][idx[a]];
    acc += coeffs[s] * e;
  }
  return inverse_scale_ * acc.real();
}

bool VelocityGrid::same_as(const VelocityGrid& other) const {
  return dim_ == other.dim_ && n_ == other.n_ && L_ == other.L_;
}

State::State(GridPtr grid, std::vector<double> values, double t)
    : grid_(std::move(grid)), values_(std::move(values)), t_(t) {
  if (!grid_) throw Error("state needs a grid");
  if (values_.size() != grid_->size()) throw Error("state values do not match the grid size");
}

State::State(GridPtr grid) : grid_(std::move(grid)) {
  if (!grid_) throw Error("state needs a grid");
  values_.assign(grid_->size(), 0.0);
}

std::span<double> State::mutable_values() {
  synced_ = false;
  return values_;
}

void State::assign(std::vector<double> values) {
  if (values.size() != grid_->size()) throw Error("state values do not match the grid size");
  values_ = std::move(values);
  synced_ = false;
}

std::span<const cplx> State::coeffs() const {
  if (!synced_) {
    coeffs_.resize(values_.size());
    grid_->forward(values_, coeffs_);
    synced_ = true;
  }
  return coeffs_;
}

std::vector<cplx> forward_transform(const State& s) {
  const auto c = s.coeffs();
  return {c.begin(), c.end()};
}

State project(const State& s, int n_keep) {
  const auto& grid = s.grid();
  if (n_keep < 0 || n_keep > grid.n() / 2) throw Error("project: mode cutoff out of range");
  std::vector<cplx> c = forward_transform(s);
  for (std::size_t slot = 0; slot < c.size(); ++slot) {
    const auto idx = grid.unflatten(slot);
    for (int a = 0; a < grid.dim(); ++a) {
      if (std::abs(grid.signed_mode(idx[a])) > n_keep) {
        c[slot] = 0.0;
        break;
      }
    }
  }
  std::vector<double> out(grid.size());
  grid.inverse_real(c, out);
  return State(s.grid_ptr(), std::move(out), s.time());
}

std::vector<double> spectral_derivative(const State& s, const std::array<int, 3>& order) {
  const auto& grid = s.grid();
  bool trivial = true;
  for (int a = 0; a < grid.dim(); ++a) {
    if (order[a] < 0) throw Error("derivative order must be nonnegative");
    trivial = trivial && order[a] == 0;
  }
  if (trivial) return {s.values().begin(), s.values().end()};

  std::vector<cplx> c = forward_transform(s);
  for (std::size_t slot = 0; slot < c.size(); ++slot) {
    const auto idx = grid.unflatten(slot);
    cplx factor = 1.0;
    for (int a = 0; a < grid.dim(); ++a) {
      if (order[a] == 0) continue;
      if (idx[a] == grid.n() / 2 && order[a] % 2 == 1) {
        factor = 0.0;
        break;
      }
      factor *= std::pow(cplx(0.0, grid.wavenumber(grid.signed_mode(idx[a]))), order[a]);
    }
    c[slot] *= factor;
  }
  std::vector<double> out(grid.size());
  grid.inverse_real(c, out);
  return out;
}

double l2_norm(const VelocityGrid& grid, std::span<const double> values) {
  double acc = 0.0;
  for (double x : values) acc += x * x;
  return std::sqrt(acc * grid.cell_volume());
}

double weighted_l2_norm(const VelocityGrid& grid, std::span<const double> values, double k) {
  if (k == 0.0) return l2_norm(grid, values);
  double acc = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) {
    const Vec v = grid.velocity(j);
    const double bracket = 1.0 + v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
    const double w = std::pow(bracket, 0.5 * k);
    acc += values[j] * values[j] * w * w;
  }
  return std::sqrt(acc * grid.cell_volume());
}

double sobolev_norm(const State& s, const std::array<int, 3>& alpha, double k) {
  const auto& grid = s.grid();
  std::array<int, 3> top{0, 0, 0};
  for (int a = 0; a < grid.dim(); ++a) top[a] = alpha[a];
  double acc = 0.0;
  for (int b0 = 0; b0 <= top[0]; ++b0)
    for (int b1 = 0; b1 <= top[1]; ++b1)
      for (int b2 = 0; b2 <= top[2]; ++b2) {
        const auto d = spectral_derivative(s, {b0, b1, b2});
        const double nrm = weighted_l2_norm(grid, d, k);
        acc += nrm * nrm;
      }
  return std::sqrt(acc);
}

namespace {

double std_normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }
double upper_tail(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

struct AxisTail {
  double outside_mass;    // P(|x| > L)
  double outside_second;  // E[x^2; |x| > L]
  double total_second;    // E[x^2]
};

AxisTail axis_tail(double mean, double variance, double L) {
  const double sigma = std::sqrt(variance);
  const double a = (L - mean) / sigma;
  const double b = (L + mean) / sigma;
  AxisTail t{};
  t.outside_mass = upper_tail(a) + upper_tail(b);
  const double upper = mean * mean * upper_tail(a) + 2.0 * mean * sigma * std_normal_pdf(a) +
                       variance * (a * std_normal_pdf(a) + upper_tail(a));
  const double lower = mean * mean * upper_tail(b) - 2.0 * mean * sigma * std_normal_pdf(b) +
                       variance * (b * std_normal_pdf(b) + upper_tail(b));
  t.outside_second = upper + lower;
  t.total_second = mean * mean + variance;
  return t;
}

// 1 - prod_a (1 - q_a) without cancellation.
double one_minus_product(const std::vector<double>& q, int skip) {
  double log_inside = 0.0;
  for (int a = 0; a < static_cast<int>(q.size()); ++a)
    if (a != skip) log_inside += std::log1p(-q[a]);
  return -std::expm1(log_inside);
}

void validate(const DomainRequest& r) {
  if (r.dim != 2 && r.dim != 3) throw Error("choose_domain: dimension must be 2 or 3");
  if (!(r.mass > 0.0)) throw Error("choose_domain: mass must be positive");
  if (!(r.temperature > 0.0)) throw Error("choose_domain: temperature must be positive");
  if (!(r.tolerance > 0.0 && r.tolerance < 1.0)) throw Error("choose_domain: tolerance must lie in (0, 1)");
  if (!(r.dilation >= 1.0)) throw Error("choose_domain: dilation constant must be >= 1");
  if (!(r.support_radius >= 0.0)) throw Error("choose_domain: support radius must be nonnegative");
}

double reference_mass_energy(const DomainRequest& r) {
  double u2 = 0.0;
  for (int a = 0; a < r.dim; ++a) u2 += r.mean_velocity[a] * r.mean_velocity[a];
  return r.mass * (1.0 + u2 + r.dim * r.temperature);
}

}  // namespace

double maxwellian_tail(const DomainRequest& req, double L) {
  if (L <= 0.0) return req.dilation * reference_mass_energy(req);
  std::vector<double> q(req.dim);
  std::vector<AxisTail> tails(req.dim);
  for (int a = 0; a < req.dim; ++a) {
    tails[a] = axis_tail(req.mean_velocity[a], req.temperature, L);
    q[a] = tails[a].outside_mass;
  }
  double acc = one_minus_product(q, -1);
  for (int a = 0; a < req.dim; ++a) {
    const double inside_second = tails[a].total_second - tails[a].outside_second;
    acc += tails[a].outside_second + inside_second * one_minus_product(q, a);
  }
  return req.dilation * req.mass * acc;
}

DomainChoice choose_domain(const DomainRequest& req) {
  validate(req);
  const double target = req.tolerance * reference_mass_energy(req);
  const auto ok = [&](double L) { return maxwellian_tail(req, L) <= target; };

  DomainChoice out;
  const double lo_bound = req.support_radius;
  if (ok(lo_bound)) {
    out.half_width = lo_bound;
    out.support_limited = true;
    out.tail_ratio = maxwellian_tail(req, lo_bound) / target;
    return out;
  }
  double lo = lo_bound;
  double hi = std::max(lo_bound, std::sqrt(req.temperature));
  while (!ok(hi)) {
    lo = hi;
    hi *= 2.0;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? hi : lo) = mid;
  }
  out.half_width = hi;
  out.tail_ratio = maxwellian_tail(req, hi) / target;
  return out;
}

}  // namespace conboltz
