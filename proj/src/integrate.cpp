#include "conboltz/integrate.hpp"

#include <chrono>
#include <cmath>

namespace conboltz {

namespace {

// y = x + a * k
std::vector<double> axpy(std::span<const double> x, double a, const std::vector<double>& k) {
  std::vector<double> y(x.begin(), x.end());
  for (std::size_t j = 0; j < y.size(); ++j) y[j] += a * k[j];
  return y;
}

void require_finite(std::span<const double> v) {
  for (std::size_t j = 0; j < v.size(); ++j)
    if (!std::isfinite(v[j])) throw StepError("non-finite value at node " + std::to_string(j));
}

}  // namespace

std::vector<double> rhs(const State& s, const CollisionWorkspace& ws, const ConstraintSystem& cs) {
  return conserve_discrete(q_u(s, ws), cs);
}

State step(const State& s, double dt, Method method, const CollisionWorkspace& ws, const ConstraintSystem& cs,
           bool conserve_every_stage) {
  if (!(dt > 0.0)) throw Error("step: dt must be positive");
  const auto F = [&](const std::vector<double>& g) {
    State st(s.grid_ptr(), g, s.time());
    return conserve_every_stage ? rhs(st, ws, cs) : q_u(st, ws);
  };
  const std::vector<double> g0(s.values().begin(), s.values().end());
  std::vector<double> incr(g0.size(), 0.0);
  switch (method) {
    case Method::Euler: {
      incr = F(g0);
      break;
    }
    case Method::RK2: {
      const auto k1 = F(g0);
      const auto k2 = F(axpy(g0, dt, k1));
      for (std::size_t j = 0; j < incr.size(); ++j) incr[j] = 0.5 * (k1[j] + k2[j]);
      break;
    }
    case Method::RK4: {
      const auto k1 = F(g0);
      const auto k2 = F(axpy(g0, 0.5 * dt, k1));
      const auto k3 = F(axpy(g0, 0.5 * dt, k2));
      const auto k4 = F(axpy(g0, dt, k3));
      for (std::size_t j = 0; j < incr.size(); ++j) incr[j] = (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]) / 6.0;
      break;
    }
  }
  if (!conserve_every_stage) incr = conserve_discrete(incr, cs);
  std::vector<double> g1 = axpy(g0, dt, incr);
  require_finite(g1);
  return State(s.grid_ptr(), std::move(g1), s.time() + dt);
}

double auto_dt(const State& s, const KernelSpec& spec, const VelocityGrid& grid, double cfl) {
  const double m0 = moments(s).mass;
  if (!(m0 > 0.0)) throw Error("auto_dt: the state has no positive mass");
  if (!(cfl > 0.0)) throw Error("auto_dt: cfl must be positive");
  const double nu_max = m0 * std::pow(truncation_radius(grid, spec), spec.lambda());
  return cfl / nu_max;
}

const char* method_name(Method m) {
  switch (m) {
    case Method::Euler: return "euler";
    case Method::RK2: return "rk2";
    case Method::RK4: return "rk4";
  }
  return "?";
}

RunSummary run(const State& initial, const IntegratorConfig& cfg, const CollisionWorkspace& ws,
               const ConstraintSystem& cs, std::span<const DiagnosticSink> sinks) {
  if (!(cfg.t_end >= 0.0)) throw Error("run: t_end must be nonnegative");
  if (cfg.diagnostic_every < 1) throw Error("run: diagnostic cadence must be at least 1");
  const auto start = std::chrono::steady_clock::now();
  RunSummary out{initial, {}, 0.0, 0.0, 0, false, {}};
  const double lambda = ws.spec().lambda();
  const auto record = [&](const State& s, std::size_t n) {
    out.series.push_back(moments(s, lambda));
    for (const auto& sink : sinks) sink(s, n);
  };

  std::size_t nsteps = 0;
  if (cfg.t_end > 0.0) {
    const double dt0 = cfg.dt ? *cfg.dt : auto_dt(initial, ws.spec(), ws.grid(), cfg.cfl);
    if (!(dt0 > 0.0)) throw Error("run: dt must be positive");
    nsteps = static_cast<std::size_t>(std::ceil(cfg.t_end / dt0 - 1e-9));
    if (nsteps == 0) nsteps = 1;
    out.dt = cfg.t_end / static_cast<double>(nsteps);
  }

  State current = initial;
  record(current, 0);
  for (std::size_t n = 1; n <= nsteps; ++n) {
    try {
      State next = step(current, out.dt, cfg.method, ws, cs, cfg.conserve_every_stage);
      next.set_time(initial.time() + cfg.t_end * static_cast<double>(n) / static_cast<double>(nsteps));
      current = std::move(next);
    } catch (const Error& e) {
      out.aborted = true;
      out.abort_reason = e.what();
      break;
    }
    out.steps = n;
    if (n % static_cast<std::size_t>(cfg.diagnostic_every) == 0 || n == nsteps) record(current, n);
  }
  out.final_state = current;
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace conboltz
