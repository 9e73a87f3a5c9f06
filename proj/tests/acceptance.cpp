// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "conboltz/app.hpp"
#include "conboltz/collision.hpp"
#include "conboltz/conserve.hpp"
#include "conboltz/diagnostics.hpp"
#include "conboltz/oracle.hpp"

using namespace conboltz;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  std::printf("%s [%d] %s: %s\n", pass ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

double l2_diff(const VelocityGrid& g, std::span<const double> a, std::span<const double> b) {
  std::vector<double> d(a.size());
  for (std::size_t j = 0; j < d.size(); ++j) d[j] = a[j] - b[j];
  return l2_norm(g, d);
}

std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

RunConfig benchmark_config(double beta = 1.0) {
  RunConfig c = parse_config(R"([physics]
dim = 3
lambda = 1
beta = 1
[initial]
type = two-gaussian
separation = 1
[domain]
tolerance = 1e-4
[grid]
n = 16
[integrator]
method = rk4
mean_free_times = 5
)");
  c.physics.beta = beta;
  return c;
}

struct Trace {
  Problem problem;
  RunSummary summary;
  std::vector<State> states;
  std::vector<double> error;  // ||g - M0||_2
  std::vector<double> negative;
  std::vector<double> entropy;
};

Trace benchmark(const RunConfig& cfg) {
  Problem p = setup_problem(cfg);
  std::ostringstream log;
  const auto ws = problem_workspace(p, log);
  std::cout << "  " << log.str();
  const auto cs = build_constraints(p.grid, cfg.physics.beta == 1.0 ? ConstraintKind::Elastic : ConstraintKind::Inelastic);
  IntegratorConfig ic;
  ic.method = cfg.integrator.method;
  ic.cfl = cfg.integrator.cfl;
  ic.t_end = p.t_end;
  std::vector<State> states;
  std::vector<double> error, negative, ent;
  const DiagnosticSink sink[1] = {[&](const State& s, std::size_t) {
    states.push_back(s);
    error.push_back(l2_diff(*p.grid, s.values(), p.equilibrium.values()));
    negative.push_back(negative_part_norm(s));
    ent.push_back(entropy(s));
  }};
  RunSummary summary = run(p.initial, ic, *ws, cs, sink);
  Trace t{p, std::move(summary), std::move(states), std::move(error), std::move(negative), std::move(ent)};
  std::cout << "  L = " << p.domain.half_width << ", tau = " << p.mean_free_time << ", t_end = " << p.t_end
            << ", steps = " << t.summary.steps << ", dt = " << t.summary.dt << ", wall " << t.summary.wall_seconds
            << " s\n";
  return t;
}

// Largest increase of series[i + 1] over series[i] for i past the first 10% of steps.
double worst_rise(const std::vector<double>& series) {
  const std::size_t start = series.size() / 10;
  double worst = 0.0;
  for (std::size_t i = std::max<std::size_t>(start, 1); i < series.size(); ++i)
    worst = std::max(worst, series[i] - series[i - 1]);
  return worst;
}

void criterion_conservation(const Trace& b) {
  double drift = 0.0;
  for (const auto& m : b.summary.series) drift = std::max(drift, max_relative_drift(b.summary.series.front(), m, 3));
  const bool ok = !b.summary.aborted && drift <= 1e-9;
  report(1, "discrete conservation on the relaxation benchmark", ok,
         "max relative drift " + sci(drift) + " (limit 1e-9), run " + sci(b.summary.wall_seconds) + " s");
}

void criterion_projection() {
  std::mt19937_64 rng(2024);
  double worst_feasible = 0.0, worst_idem = 0.0;
  for (int n : {8, 16}) {
    const auto g = std::make_shared<VelocityGrid>(3, 3.0, n);
    const auto cs = build_constraints(g, ConstraintKind::Elastic);
    const Eigen::MatrixXd absC = cs.matrix().cwiseAbs();
    for (int trial = 0; trial < 1000; ++trial) {
      const auto x = random_vector(g->size(), rng);
      const auto p = conserve_discrete(x, cs);
      const auto pp = conserve_discrete(p, cs);
      const Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
      // Residual relative to the size of the products that cancel in C x.
      const double scale = (absC * xv.cwiseAbs()).maxCoeff();
      worst_feasible = std::max(worst_feasible, cs.apply(p).cwiseAbs().maxCoeff() / scale);
      double diff = 0.0, size = 0.0;
      for (std::size_t j = 0; j < p.size(); ++j) {
        diff = std::max(diff, std::abs(pp[j] - p[j]));
        size = std::max(size, std::abs(p[j]));
      }
      worst_idem = std::max(worst_idem, diff / size);
    }
  }
  double worst_kkt = 0.0;
  for (int n : {8, 16}) {
    const auto g = std::make_shared<VelocityGrid>(3, 3.0, n);
    for (auto kind : {ConstraintKind::Elastic, ConstraintKind::Inelastic}) {
      const auto cs = build_constraints(g, kind);
      const auto x = random_vector(g->size(), rng);
      const auto a = conserve_discrete(x, cs);
      const auto d = nearest_conservative_dense(x, cs.matrix());
      double diff = 0.0, size = 0.0;
      for (std::size_t j = 0; j < a.size(); ++j) {
        diff = std::max(diff, std::abs(a[j] - d[j]));
        size = std::max(size, std::abs(x[j]));
      }
      worst_kkt = std::max(worst_kkt, diff / size);
    }
  }
  const bool ok = worst_feasible <= 1e-12 && worst_idem <= 1e-12 && worst_kkt <= 1e-10;
  report(2, "projection algebra", ok,
         "C Lambda residual " + sci(worst_feasible) + ", idempotency " + sci(worst_idem) + " (limit 1e-12); dense KKT " +
             sci(worst_kkt) + " at M up to 4096 (limit 1e-10)");
}

State anisotropic_gaussian(GridPtr g) {
  const double var[3] = {0.5, 1.0, 1.5};
  std::vector<double> v(g->size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    const Vec x = g->velocity(j);
    double e = 0.0, norm = 1.0;
    for (int a = 0; a < 3; ++a) {
      e += x[a] * x[a] / (2 * var[a]);
      norm *= std::sqrt(2 * std::numbers::pi * var[a]);
    }
    v[j] = std::exp(-e) / norm;
  }
  return State(std::move(g), std::move(v));
}

State two_gaussian(GridPtr g) {
  const double var = 2.0 / 3.0;
  std::vector<double> v(g->size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    const Vec x = g->velocity(j);
    const double r2 = x[1] * x[1] + x[2] * x[2];
    const double a = (x[0] - 1) * (x[0] - 1) + r2, b = (x[0] + 1) * (x[0] + 1) + r2;
    v[j] = 0.5 * (std::exp(-a / (2 * var)) + std::exp(-b / (2 * var))) / std::pow(2 * std::numbers::pi * var, 1.5);
  }
  return State(std::move(g), std::move(v));
}

double oracle_difference(int n, int sphere_order, double L, double lambda, bool anisotropic) {
  const auto g = std::make_shared<VelocityGrid>(3, L, n);
  const State f = project(anisotropic ? anisotropic_gaussian(g) : two_gaussian(g), collision_band(*g));
  const KernelSpec spec = KernelSpec::isotropic(3, lambda, 1.0);
  const auto qu = q_u(f, *make_workspace(g, spec));
  QuadratureSpec q;
  q.sphere_order = sphere_order;
  // The spectral output is band limited; compare with the band-limited oracle.
  const State direct = project(State(g, collision_direct(f, spec, q).field), collision_band(*g));
  return l2_diff(*g, qu, direct.values()) / l2_norm(*g, qu);
}

void criterion_oracle(double L) {
  bool ok = true;
  std::string detail;
  for (bool aniso : {true, false})
    for (double lambda : {0.0, 1.0}) {
      const double e8 = oracle_difference(8, 16, L, lambda, aniso);
      const double e10 = oracle_difference(10, 32, L, lambda, aniso);
      ok = ok && e8 <= 1e-3 && e10 < e8;
      const std::string line = std::string(aniso ? "gaussian" : "two-gaussian") + " lambda=" +
                               (lambda == 0.0 ? "0" : "1") + ": " + sci(e8) + " -> " + sci(e10);
      std::cout << "  " << line << "\n";
      detail += (detail.empty() ? "" : "; ") + line;
    }
  report(3, "oracle equivalence (n=8 rel. L2 <= 1e-3, decreasing at n=10)", ok, detail);
}

double maxwellian_residual(double tolerance, int n) {
  DomainRequest req;
  req.tolerance = tolerance;
  const auto g = std::make_shared<VelocityGrid>(3, choose_domain(req).half_width, n);
  const KernelSpec spec = KernelSpec::isotropic(3, 1.0, 1.0);
  return l2_norm(*g, q_u(maxwellian(g, 1.0, {0, 0, 0}, 1.0), *make_workspace(g, spec)));
}

void criterion_fixed_point() {
  // Well resolved: the domain drops less than 1e-8 of the Maxwellian, so the
  // residual measures the discretization rather than the cut-off.
  const double q8 = maxwellian_residual(1e-8, 8), q16 = maxwellian_residual(1e-8, 16);
  const double q_ratio = q8 / q16;
  const double coarse_ratio = maxwellian_residual(1e-4, 8) / maxwellian_residual(1e-4, 16);

  // Projection error of a Gaussian on a fine grid, N = 4 and 8 retained modes.
  DomainRequest req;
  req.tolerance = 1e-4;
  const auto fine = std::make_shared<VelocityGrid>(3, choose_domain(req).half_width, 64);
  const State m = maxwellian(fine, 1.0, {0, 0, 0}, 1.0);
  const double p4 = l2_diff(*fine, m.values(), project(m, 4).values());
  const double p8 = l2_diff(*fine, m.values(), project(m, 8).values());
  const double p_ratio = p4 / p8;
  const bool ok = q_ratio >= 4.0 && p_ratio >= 4.0;
  report(4, "Maxwellian fixed point and projection rate", ok,
         "||q_u(M)|| " + sci(q8) + " -> " + sci(q16) + " ratio " + sci(q_ratio) + " (>= 4; " + sci(coarse_ratio) +
             " on the mu = 1e-4 domain); ||g - Pi g|| ratio " + sci(p_ratio) + " (>= 2^2)");
}

void criterion_relaxation(const Trace& b) {
  const double m0 = l2_norm(*b.problem.grid, b.problem.equilibrium.values());
  const double final_rel = b.error.back() / m0;
  const double rise = worst_rise(b.error);
  const bool ok = final_rel <= 1e-2 && rise <= 1e-6 * m0;
  report(5, "relaxation to the initial-invariant Maxwellian", ok,
         "final ||g - M0||/||M0|| " + sci(final_rel) + " (limit 1e-2), largest rise after 10% " + sci(rise / m0) +
             " of ||M0|| (limit 1e-6)");
}

double sup_negative(const Trace& b) { return *std::max_element(b.negative.begin(), b.negative.end()); }

void criterion_negative(const Trace& b, const Trace& wide, const Trace& wide_coarse) {
  const double g0 = l2_norm(*b.problem.grid, b.problem.initial.values());
  const double sup = sup_negative(b), sup_wide = sup_negative(wide);
  const bool ok = sup <= 1e-3 * g0 && sup_wide < sup;
  report(6, "negative mass control", ok,
         "sup ||g-|| / ||g0|| " + sci(sup / g0) + " (limit 1e-3); at 1.5L with the same spacing " + sci(sup_wide / g0) +
             " (must be smaller; " + sci(sup_negative(wide_coarse) / g0) + " at 1.5L keeping n = 16)");
}

void criterion_inelastic(const Trace& b) {
  const auto& s = b.summary.series;
  double drift = 0.0, rise = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    drift = std::max(drift, max_relative_drift(s.front(), s[i], 3, false));
    if (i > 0) rise = std::max(rise, (s[i].energy - s[i - 1].energy) / s.front().energy);
  }
  // Oracle energy moment on about a dozen states spread over the run.
  QuadratureSpec q;
  q.sphere_order = 8;
  q.stride = 2;
  double worst_energy = -std::numeric_limits<double>::infinity();
  const std::size_t every = std::max<std::size_t>(1, b.states.size() / 10);
  int sampled = 0;
  for (std::size_t i = 0; i < b.states.size(); i += every, ++sampled)
    worst_energy = std::max(worst_energy, collision_direct(b.states[i], b.problem.spec, q).energy_weak);
  const bool ok = !b.summary.aborted && drift <= 1e-9 && rise <= 0.0 && worst_energy <= 0.0;
  report(7, "inelastic mode (beta = 0.8)", ok,
         "mass/momentum drift " + sci(drift) + " (limit 1e-9), largest energy rise " + sci(rise) +
             " (must be <= 0), max oracle energy moment over " + std::to_string(sampled) + " states " + sci(worst_energy) +
             " (must be <= 0)");
}

void criterion_entropy(const Trace& b) {
  double scale = 0.0;
  for (double h : b.entropy) scale = std::max(scale, std::abs(h));
  const double rise = worst_rise(b.entropy);
  report(8, "entropy of g+ non-increasing after the transient", rise <= 1e-6 * scale,
         "largest rise " + sci(rise / scale) + " of |H| (limit 1e-6)");
}

void criterion_tail(const Trace& b) {
  const auto& g = b.problem.grid;
  const State m = maxwellian(g, 1.0, {0, 0, 0}, 1.0);
  const auto q = q_u(m, *make_workspace(g, b.problem.spec));
  const TailReport t = tail_moment_bound_check(m, q, 1.0, 2, g->half_width() / 2);
  report(9, "tail moment bound (Gaussian, k = 2, L' = L/2)", t.ratio <= 1.0,
         "lhs " + sci(t.lhs) + ", rhs " + sci(t.rhs) + ", ratio " + sci(t.ratio) + " (limit 1)");
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();
  try {
    std::cout << "elastic benchmark\n";
    const Trace elastic = benchmark(benchmark_config());
    criterion_conservation(elastic);
    criterion_projection();
    criterion_oracle(elastic.problem.domain.half_width);
    criterion_fixed_point();
    criterion_relaxation(elastic);

    // The negative-mass trend in L holds at fixed resolution, so the wider
    // domain keeps dv with n = 24; the n = 16 rerun is reported alongside.
    RunConfig wide = benchmark_config();
    wide.domain.half_width = 1.5 * elastic.problem.domain.half_width;
    std::cout << "elastic benchmark at 1.5 L, n = 16\n";
    const Trace coarse = benchmark(wide);
    wide.n = 24;
    std::cout << "elastic benchmark at 1.5 L, n = 24\n";
    criterion_negative(elastic, benchmark(wide), coarse);

    std::cout << "inelastic benchmark\n";
    criterion_inelastic(benchmark(benchmark_config(0.8)));
    criterion_entropy(elastic);
    criterion_tail(elastic);
  } catch (const std::exception& e) {
    std::cout << "FAIL acceptance aborted: " << e.what() << "\n";
    return 1;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << " in " << secs
            << " s\n";
  return failures == 0 ? 0 : 1;
}
