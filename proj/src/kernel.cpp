#include "conboltz/kernel.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <unordered_map>

namespace conboltz {

static_assert(std::endian::native == std::endian::little, "cache format assumes a little-endian host");

namespace {

void check_physics(int dim, double lambda, double beta) {
  if (dim != 2 && dim != 3) throw Error("kernel: dimension must be 2 or 3");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw Error("kernel: lambda must lie in [0, 1]");
  if (!(beta > 0.5 && beta <= 1.0)) throw Error("kernel: beta must lie in (1/2, 1]");
}

double sinc(double x) {
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

double bessel_j0(double x) { return std::cyl_bessel_j(0.0, std::abs(x)); }

double dot(const Vec& a, const Vec& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t h = 1469598103934665603ull) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

KernelSpec::KernelSpec(int dim, double lambda, double beta) : dim_(dim), lambda_(lambda), beta_(beta) {
  check_physics(dim, lambda, beta);
}

KernelSpec KernelSpec::isotropic(int dim, double lambda, double beta) { return KernelSpec(dim, lambda, beta); }

Interaction KernelSpec::interaction() const {
  if (lambda_ == 0.0) return Interaction::MaxwellMolecules;
  if (lambda_ == 1.0) return Interaction::HardSpheres;
  return Interaction::VariableHard;
}

KernelSpec KernelSpec::with_truncation(double factor) const {
  if (!(factor > 0.0) || !std::isfinite(factor)) throw Error("kernel: truncation factor must be positive");
  KernelSpec out = *this;
  out.truncation_ = factor;
  return out;
}

double KernelSpec::b(double s) const {
  if (isotropic_) return 1.0 / sphere_area(dim_);
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < nodes_.size(); ++j) {
    const double diff = s - nodes_[j];
    if (diff == 0.0) return values_[j];
    const double t = bary_[j] / diff;
    num += t * values_[j];
    den += t;
  }
  return num / den;
}

double KernelSpec::angular_integral() const {
  if (isotropic_) return 1.0;
  const int m = static_cast<int>(values_.size());
  double acc = 0.0;
  if (dim_ == 3) {
    const Rule1D r = gauss_legendre(m);
    for (int j = 0; j < m; ++j) acc += r.weights[j] * values_[j];
    return 2.0 * std::numbers::pi * acc;
  }
  for (int j = 0; j < m; ++j) acc += values_[j];
  return 2.0 * std::numbers::pi / m * acc;
}

std::uint64_t KernelSpec::angular_hash() const {
  std::uint64_t h = fnv1a(&dim_, sizeof dim_);
  const int iso = isotropic_ ? 1 : 0;
  h = fnv1a(&iso, sizeof iso, h);
  if (!values_.empty()) h = fnv1a(values_.data(), values_.size() * sizeof(double), h);
  return h;
}

std::vector<double> angular_nodes(int dim, int count) {
  if (count < 1) throw Error("angular_nodes: need at least one sample");
  if (dim == 3) return gauss_legendre(count).nodes;
  if (dim == 2) return gauss_chebyshev(count).nodes;
  throw Error("angular_nodes: dimension must be 2 or 3");
}

KernelSpec normalize_angular(int dim, double lambda, double beta, std::span<const double> b_raw) {
  KernelSpec spec(dim, lambda, beta);
  if (b_raw.empty()) throw Error("normalize_angular: no samples");
  bool any = false;
  for (double x : b_raw) {
    if (!std::isfinite(x) || x < 0.0) throw Error("normalize_angular: samples must be finite and nonnegative");
    any = any || x > 0.0;
  }
  if (!any) throw Error("normalize_angular: angular function is identically zero");
  spec.isotropic_ = false;
  spec.nodes_ = angular_nodes(dim, static_cast<int>(b_raw.size()));
  spec.values_.assign(b_raw.begin(), b_raw.end());
  const std::size_t m = spec.nodes_.size();
  spec.bary_.assign(m, 1.0);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t k = 0; k < m; ++k)
      if (k != j) spec.bary_[j] /= spec.nodes_[j] - spec.nodes_[k];
  const double total = spec.angular_integral();
  for (double& x : spec.values_) x /= total;
  return spec;
}

cplx weight_G(const Vec& u, const Vec& zeta, const KernelSpec& spec) {
  if (!spec.is_isotropic()) return weight_G_quadrature(u, zeta, spec);
  const double r = norm(u);
  if (r == 0.0) return 0.0;
  const double beta = spec.beta();
  const double a = 0.5 * beta * r * norm(zeta);
  const double radial = spec.dim() == 3 ? sinc(a) : bessel_j0(a);
  return std::pow(r, spec.lambda()) * (std::polar(radial, 0.5 * beta * dot(zeta, u)) - 1.0);
}

namespace {

cplx weight_G_fixed(const Vec& u, double r, const Vec& zeta, const KernelSpec& spec, int order) {
  const Vec axis{u[0] / r, u[1] / r, u[2] / r};
  const SphereRule rule = sphere_rule(spec.dim(), order, axis);
  const double hb = 0.5 * spec.beta();
  const double zu = dot(zeta, u);
  cplx acc = 0.0;
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const double phase = -hb * (r * dot(zeta, rule.nodes[q]) - zu);
    acc += rule.weights[q] * spec.b(rule.cosines[q]) * (std::polar(1.0, phase) - 1.0);
  }
  return std::pow(r, spec.lambda()) * acc;
}

}  // namespace

cplx weight_G_quadrature(const Vec& u, const Vec& zeta, const KernelSpec& spec) {
  const double r = norm(u);
  if (r == 0.0) return 0.0;
  const double scale = 2.0 * std::pow(r, spec.lambda());
  int order = 32;
  cplx prev = weight_G_fixed(u, r, zeta, spec, order);
  while (order < 512) {
    order *= 2;
    const cplx next = weight_G_fixed(u, r, zeta, spec, order);
    if (std::abs(next - prev) <= 1e-14 * std::max(1.0, scale)) return next;
    prev = next;
  }
  return prev;
}

double truncation_radius(const VelocityGrid& grid, const KernelSpec& spec) {
  return spec.truncation() * grid.half_width();
}

namespace {

template <unsigned Points, class F>
double gk_integrate(F&& f, double a, double b, int depth, double tol, double* err, double* l1) {
  return boost::math::quadrature::gauss_kronrod<double, Points>::integrate(f, a, b, depth, tol, err, l1);
}

template <class F>
double radial_integral(F&& f, double R, double omega, const RadialQuadrature& rq,
                       double* err_out, double* l1_out) {
  // Panels of about two oscillation periods keep the adaptive rule honest.
  const int panels = 1 + static_cast<int>(R * omega / (4.0 * std::numbers::pi));
  const double rel = std::max(rq.tolerance, 10.0 * std::numeric_limits<double>::epsilon());
  double total = 0.0, err = 0.0, l1 = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double a = R * p / panels, b = R * (p + 1) / panels;
    double e = 0.0, l = 0.0, v = 0.0;
    switch (rq.kronrod_points) {
      case 15: v = gk_integrate<15>(f, a, b, rq.max_depth, rel, &e, &l); break;
      case 31: v = gk_integrate<31>(f, a, b, rq.max_depth, rel, &e, &l); break;
      case 61: v = gk_integrate<61>(f, a, b, rq.max_depth, rel, &e, &l); break;
      default: throw Error("radial quadrature: Kronrod points must be 15, 31 or 61");
    }
    total += v;
    err += e;
    l1 += l;
  }
  *err_out = err;
  *l1_out = l1;
  return total;
}

std::string describe_pair(const Vec& xi, const Vec& zeta) {
  std::ostringstream os;
  os.precision(17);
  os << "xi = (" << xi[0] << ", " << xi[1] << ", " << xi[2] << "), zeta = (" << zeta[0] << ", " << zeta[1]
     << ", " << zeta[2] << ")";
  return os.str();
}

cplx ghat_isotropic(const Vec& xi, const Vec& zeta, double R, const KernelSpec& spec, const RadialQuadrature& rq) {
  const double beta = spec.beta();
  const double lam = spec.lambda();
  const double zn = norm(zeta);
  const double xn = norm(xi);
  const Vec shifted{xi[0] - 0.5 * beta * zeta[0], xi[1] - 0.5 * beta * zeta[1], xi[2] - 0.5 * beta * zeta[2]};
  const double sn = norm(shifted);
  const double omega = 0.5 * beta * zn + sn + xn;
  double err = 0.0, l1 = 0.0, value = 0.0;
  const int d = spec.dim();
  const double scale = 2.0 * sphere_area(d) * std::pow(R, lam + d) / (lam + d);
  if (d == 3) {
    auto f = [&](double r) {
      return std::pow(r, lam + 2.0) * (sinc(0.5 * beta * r * zn) * sinc(r * sn) - sinc(r * xn));
    };
    value = 4.0 * std::numbers::pi * radial_integral(f, R, omega, rq, &err, &l1);
    err *= 4.0 * std::numbers::pi;
    l1 *= 4.0 * std::numbers::pi;
  } else {
    auto f = [&](double r) {
      return std::pow(r, lam + 1.0) * (bessel_j0(0.5 * beta * r * zn) * bessel_j0(r * sn) - bessel_j0(r * xn));
    };
    value = 2.0 * std::numbers::pi * radial_integral(f, R, omega, rq, &err, &l1);
    err *= 2.0 * std::numbers::pi;
    l1 *= 2.0 * std::numbers::pi;
  }
  // The Kronrod estimate cannot drop below the rounding of the cancelling
  // integrand, which scales with its L1 norm.
  const double allowed =
      std::max(rq.tolerance * std::max(scale, 1.0), 1024.0 * std::numeric_limits<double>::epsilon() * l1);
  if (!std::isfinite(value) || err > allowed) {
    std::ostringstream os;
    os << "radial quadrature did not converge (error estimate " << err << ") for " << describe_pair(xi, zeta);
    throw QuadratureError(os.str());
  }
  return value;
}

cplx ghat_nested(const Vec& xi, const Vec& zeta, double R, const KernelSpec& spec, const NestedQuadrature& nq) {
  const int d = spec.dim();
  const SphereRule outer = sphere_rule(d, nq.outer_order);
  std::vector<SphereRule> inner;
  inner.reserve(outer.nodes.size());
  for (const auto& w : outer.nodes) inner.push_back(sphere_rule(d, nq.inner_order, w));
  const double hb = 0.5 * spec.beta();
  cplx total = 0.0;
  for (int p = 0; p < nq.radial_panels; ++p) {
    const Rule1D rad = gauss_legendre(nq.radial_order, R * p / nq.radial_panels, R * (p + 1) / nq.radial_panels);
    for (std::size_t i = 0; i < rad.nodes.size(); ++i) {
      const double r = rad.nodes[i];
      const double jac = rad.weights[i] * std::pow(r, d - 1) * std::pow(r, spec.lambda());
      for (std::size_t o = 0; o < outer.nodes.size(); ++o) {
        const Vec& w = outer.nodes[o];
        const double zu = r * dot(zeta, w);
        cplx g = 0.0;
        const SphereRule& s = inner[o];
        for (std::size_t q = 0; q < s.nodes.size(); ++q) {
          const double phase = -hb * (r * dot(zeta, s.nodes[q]) - zu);
          g += s.weights[q] * spec.b(s.cosines[q]) * (std::polar(1.0, phase) - 1.0);
        }
        total += jac * outer.weights[o] * g * std::polar(1.0, -r * dot(xi, w));
      }
    }
  }
  return total;
}

}  // namespace

cplx weight_G_hat(const Vec& xi, const Vec& zeta, const VelocityGrid& grid, const KernelSpec& spec,
                  const RadialQuadrature& rq, const NestedQuadrature& nq) {
  if (spec.dim() != grid.dim()) throw Error("weight_G_hat: kernel and grid dimensions differ");
  for (int a = 0; a < 3; ++a)
    if (!std::isfinite(xi[a]) || !std::isfinite(zeta[a])) throw Error("weight_G_hat: non-finite mode");
  if (norm(zeta) == 0.0) return 0.0;
  const double R = truncation_radius(grid, spec);
  if (spec.is_isotropic()) return ghat_isotropic(xi, zeta, R, spec, rq);
  return ghat_nested(xi, zeta, R, spec, nq);
}

std::array<int, 3> WeightTable::band_mode(std::size_t b) const {
  const int W = 2 * band_ + 1;
  std::array<int, 3> k{0, 0, 0};
  for (int a = dim_ - 1; a >= 0; --a) {
    k[a] = static_cast<int>(b % W) - band_;
    b /= W;
  }
  return k;
}

std::size_t WeightTable::band_index(const std::array<int, 3>& k) const {
  const int W = 2 * band_ + 1;
  std::size_t b = 0;
  for (int a = 0; a < dim_; ++a) b = b * W + static_cast<std::size_t>(k[a] + band_);
  return b;
}

std::size_t estimate_table_bytes(const VelocityGrid& grid, TableMode mode) {
  const std::size_t W = 2 * collision_band(grid) + 1;
  std::size_t B = 1;
  for (int a = 0; a < grid.dim(); ++a) B *= W;
  const std::size_t pairs = B * B;
  return mode == TableMode::Reduced ? pairs * sizeof(std::uint32_t) : pairs * sizeof(cplx);
}

namespace {

constexpr char kMagic[8] = {'C', 'B', 'Z', 'G', 'H', 'A', 'T', '\0'};
constexpr std::uint32_t kCacheVersion = 2;

// Rotation/reflection invariants (|k|^2, |m|^2, k.m) packed into one word.
std::uint64_t pair_key(const std::array<int, 3>& k, const std::array<int, 3>& m) {
  const std::int64_t kk = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
  const std::int64_t mm = m[0] * m[0] + m[1] * m[1] + m[2] * m[2];
  const std::int64_t km = k[0] * m[0] + k[1] * m[1] + k[2] * m[2];
  return (static_cast<std::uint64_t>(kk) << 42) | (static_cast<std::uint64_t>(mm) << 21) |
         static_cast<std::uint64_t>(km + (1 << 20));
}

std::string table_descriptor(const VelocityGrid& grid, const KernelSpec& spec, const TableOptions& o) {
  std::ostringstream os;
  os.precision(17);
  os << "d=" << grid.dim() << ";n=" << grid.n() << ";L=" << grid.half_width() << ";lambda=" << spec.lambda()
     << ";beta=" << spec.beta() << ";umax=" << truncation_radius(grid, spec) << ";angular=" << std::hex
     << spec.angular_hash() << std::dec;
  if (spec.is_isotropic())
    os << ";gk=" << o.radial.kronrod_points << ";tol=" << o.radial.tolerance << ";depth=" << o.radial.max_depth;
  else
    os << ";nested=" << o.nested.radial_panels << "," << o.nested.radial_order << "," << o.nested.outer_order << ","
       << o.nested.inner_order;
  return os.str();
}

struct CachedValues {
  std::unordered_map<std::uint64_t, cplx> values;
};

template <class T>
void write_pod(std::ofstream& out, const T& x) {
  out.write(reinterpret_cast<const char*>(&x), sizeof x);
}
template <class T>
bool read_pod(std::ifstream& in, T& x) {
  return static_cast<bool>(in.read(reinterpret_cast<char*>(&x), sizeof x));
}

std::optional<CachedValues> load_cache(const std::filesystem::path& file, const std::string& descriptor) {
  std::ifstream in(file, std::ios::binary);
  if (!in) return std::nullopt;
  char magic[8];
  if (!in.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0) return std::nullopt;
  std::uint32_t version = 0, desc_len = 0;
  if (!read_pod(in, version) || version != kCacheVersion || !read_pod(in, desc_len)) return std::nullopt;
  std::string desc(desc_len, '\0');
  if (!in.read(desc.data(), desc_len) || desc != descriptor) return std::nullopt;
  std::uint64_t count = 0;
  if (!read_pod(in, count)) return std::nullopt;
  std::vector<std::uint64_t> keys(count);
  std::vector<double> reim(2 * count);
  if (!in.read(reinterpret_cast<char*>(keys.data()), count * sizeof(std::uint64_t))) return std::nullopt;
  if (!in.read(reinterpret_cast<char*>(reim.data()), reim.size() * sizeof(double))) return std::nullopt;
  CachedValues c;
  c.values.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) c.values.emplace(keys[i], cplx(reim[2 * i], reim[2 * i + 1]));
  return c;
}

void store_cache(const std::filesystem::path& file, const std::string& descriptor,
                 const std::vector<std::uint64_t>& keys, const std::vector<cplx>& values) {
  std::filesystem::create_directories(file.parent_path());
  const auto tmp = file.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write weight-table cache " + tmp);
    out.write(kMagic, 8);
    write_pod(out, kCacheVersion);
    write_pod(out, static_cast<std::uint32_t>(descriptor.size()));
    out.write(descriptor.data(), static_cast<std::streamsize>(descriptor.size()));
    write_pod(out, static_cast<std::uint64_t>(keys.size()));
    out.write(reinterpret_cast<const char*>(keys.data()), static_cast<std::streamsize>(keys.size() * 8));
    for (const cplx& v : values) {
      write_pod(out, v.real());
      write_pod(out, v.imag());
    }
    if (!out) throw Error("cannot write weight-table cache " + tmp);
  }
  std::filesystem::rename(tmp, file);
}

}  // namespace

std::string table_cache_name(const VelocityGrid& grid, const KernelSpec& spec, const TableOptions& options) {
  const std::string desc = table_descriptor(grid, spec, options);
  std::ostringstream os;
  os << "ghat-d" << grid.dim() << "-n" << grid.n() << "-" << std::hex << fnv1a(desc.data(), desc.size()) << ".bin";
  return os.str();
}

std::size_t clear_table_cache(const std::filesystem::path& dir) {
  std::size_t removed = 0;
  if (!std::filesystem::exists(dir)) return 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (entry.is_regular_file() && name.rfind("ghat-", 0) == 0 && entry.path().extension() == ".bin") {
      std::filesystem::remove(entry.path());
      ++removed;
    }
  }
  return removed;
}

std::filesystem::path default_cache_dir() {
  if (const char* env = std::getenv("CONBOLTZ_CACHE_DIR"); env != nullptr && *env != '\0') return env;
  if (const char* home = std::getenv("HOME"); home != nullptr && *home != '\0')
    return std::filesystem::path(home) / ".cache" / "conboltz";
  return std::filesystem::temp_directory_path() / "conboltz";
}

std::shared_ptr<const WeightTable> build_weight_table(const VelocityGrid& grid, const KernelSpec& spec,
                                                      const TableOptions& options) {
  if (spec.dim() != grid.dim()) throw Error("build_weight_table: kernel and grid dimensions differ");
  const double budget = options.memory_budget_mb * 1024.0 * 1024.0;
  TableMode mode = options.mode;
  const double full_bytes = static_cast<double>(estimate_table_bytes(grid, TableMode::Full));
  const double reduced_bytes = static_cast<double>(estimate_table_bytes(grid, TableMode::Reduced));
  if (mode == TableMode::Automatic) {
    const bool small = grid.dim() == 2 || grid.n() <= 16;
    if (full_bytes <= budget && (small || !spec.is_isotropic()))
      mode = TableMode::Full;
    else if (spec.is_isotropic() && reduced_bytes <= budget)
      mode = TableMode::Reduced;
    else
      mode = TableMode::Full;  // reported below
  }
  if (mode == TableMode::Reduced && !spec.is_isotropic())
    throw Error("build_weight_table: the reduced table is only available for the isotropic kernel");
  const double need = mode == TableMode::Full ? full_bytes : reduced_bytes;
  if (need > budget) {
    std::ostringstream os;
    os << "weight table needs " << need / (1024.0 * 1024.0) << " MB, over the " << options.memory_budget_mb
       << " MB budget; use the reduced table or a smaller n";
    throw BudgetError(os.str());
  }

  auto table = std::make_shared<WeightTable>();
  table->mode_ = mode;
  table->dim_ = grid.dim();
  table->band_ = collision_band(grid);
  table->umax_ = truncation_radius(grid, spec);
  const int N = table->band_;
  std::size_t B = 1;
  for (int a = 0; a < grid.dim(); ++a) B *= static_cast<std::size_t>(2 * N + 1);
  table->band_size_ = B;

  // Slot 0 of the unique list is the zero entry used for unrealised pairs.
  std::vector<std::uint64_t> keys{std::numeric_limits<std::uint64_t>::max()};
  std::vector<std::pair<Vec, Vec>> reps{{Vec{}, Vec{}}};
  std::unordered_map<std::uint64_t, std::uint32_t> lookup;
  std::vector<std::uint32_t> index(B * B, 0);
  std::vector<std::array<int, 3>> modes(B);
  for (std::size_t b = 0; b < B; ++b) modes[b] = table->band_mode(b);
  const auto wave = [&](const std::array<int, 3>& k) {
    Vec z{0.0, 0.0, 0.0};
    for (int a = 0; a < grid.dim(); ++a) z[a] = grid.wavenumber(k[a]);
    return z;
  };
  for (std::size_t k = 0; k < B; ++k) {
    const auto& kk = modes[k];
    if (kk == std::array<int, 3>{0, 0, 0}) continue;  // G_hat(., 0) = 0
    for (std::size_t m = 0; m < B; ++m) {
      const auto& mm = modes[m];
      bool realised = true;
      for (int a = 0; a < grid.dim(); ++a) realised = realised && std::abs(kk[a] - mm[a]) <= N;
      if (!realised) continue;
      const std::uint64_t key = pair_key(kk, mm);
      auto [it, inserted] = lookup.emplace(key, static_cast<std::uint32_t>(keys.size()));
      if (inserted) {
        keys.push_back(key);
        reps.emplace_back(wave(mm), wave(kk));
      }
      index[k * B + m] = it->second;
    }
  }

  std::vector<cplx> values(keys.size(), 0.0);
  std::optional<std::filesystem::path> cache_file;
  const std::string descriptor = table_descriptor(grid, spec, options);
  if (options.cache_dir) cache_file = *options.cache_dir / table_cache_name(grid, spec, options);
  bool hit = false;
  if (cache_file) {
    if (auto cached = load_cache(*cache_file, descriptor)) {
      hit = true;
      for (std::size_t i = 1; i < keys.size() && hit; ++i) {
        auto it = cached->values.find(keys[i]);
        if (it == cached->values.end())
          hit = false;
        else
          values[i] = it->second;
      }
    }
  }
  if (!hit) {
    std::exception_ptr failure;
    const long count = static_cast<long>(keys.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (long i = 1; i < count; ++i) {
      try {
        values[i] = weight_G_hat(reps[i].first, reps[i].second, grid, spec, options.radial, options.nested);
      } catch (...) {
#pragma omp critical(conboltz_table_failure)
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
    if (cache_file) {
      std::vector<std::uint64_t> ks(keys.begin() + 1, keys.end());
      std::vector<cplx> vs(values.begin() + 1, values.end());
      store_cache(*cache_file, descriptor, ks, vs);
    }
  }
  table->from_cache_ = hit;

  if (mode == TableMode::Full) {
    table->full_.resize(B * B);
    for (std::size_t p = 0; p < B * B; ++p) table->full_[p] = values[index[p]];
  } else {
    table->index_ = std::move(index);
  }
  table->unique_ = std::move(values);
  return table;
}

}  // namespace conboltz
