#include "conboltz/app.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <numbers>
#include <sstream>

namespace conboltz {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr char kSnapshotMagic[4] = {'B', 'S', 'P', 'C'};
constexpr std::uint32_t kSnapshotVersion = 1;

struct Invariants {
  double mass;
  Vec velocity;
  double temperature;
};

using Density = std::function<double(const Vec&)>;

double gaussian(const Vec& v, const Vec& c, double var, int d) {
  double r2 = 0.0;
  for (int a = 0; a < d; ++a) r2 += (v[a] - c[a]) * (v[a] - c[a]);
  return std::pow(2.0 * std::numbers::pi * var, -0.5 * d) * std::exp(-r2 / (2.0 * var));
}

Density initial_density(const RunConfig& cfg) {
  const int d = cfg.physics.dim;
  const auto& ic = cfg.initial;
  if (*ic.kind == InitialKind::Maxwellian)
    return [=](const Vec& v) { return ic.mass * gaussian(v, ic.velocity, ic.temperature, d); };
  Vec plus = ic.velocity, minus = ic.velocity;
  plus[0] += ic.separation;
  minus[0] -= ic.separation;
  return [=](const Vec& v) {
    return 0.5 * ic.mass * (gaussian(v, plus, ic.variance, d) + gaussian(v, minus, ic.variance, d));
  };
}

Invariants analytic_invariants(const RunConfig& cfg) {
  const auto& ic = cfg.initial;
  if (*ic.kind == InitialKind::Maxwellian) return {ic.mass, ic.velocity, ic.temperature};
  const double d = cfg.physics.dim;
  return {ic.mass, ic.velocity, ic.variance + ic.separation * ic.separation / d};
}

// sup f0 / M[m0, u0, T0], sampled on a lattice covering the bulk of both.
double sampled_dilation(const Density& f0, const Invariants& inv, int d, double reach) {
  const int pts = d == 3 ? 61 : 201;
  const double half = reach + 8.0 * std::sqrt(inv.temperature);
  double sup = 1.0;
  std::array<int, 3> idx{0, 0, 0};
  const int total = static_cast<int>(std::pow(pts, d));
  for (int flat = 0; flat < total; ++flat) {
    int rest = flat;
    for (int a = d - 1; a >= 0; --a) {
      idx[a] = rest % pts;
      rest /= pts;
    }
    Vec v{0.0, 0.0, 0.0};
    for (int a = 0; a < d; ++a) v[a] = inv.velocity[a] - half + 2.0 * half * idx[a] / (pts - 1);
    const double m = inv.mass * gaussian(v, inv.velocity, inv.temperature, d);
    if (m > 1e-300) sup = std::max(sup, f0(v) / m);
  }
  return sup;
}

std::string timestamp() {
  const std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json config_json(const RunConfig& c) {
  const auto opt = [](const std::optional<double>& x) -> json { return x ? json(*x) : json("auto"); };
  json j;
  j["physics"] = {{"dim", c.physics.dim},
                  {"lambda", c.physics.lambda},
                  {"beta", c.physics.beta},
                  {"truncation", c.physics.truncation},
                  {"angular", c.physics.angular.empty() ? json("isotropic") : json(c.physics.angular)}};
  j["initial"] = {{"type", c.initial.kind ? initial_name(*c.initial.kind) : "unset"},
                  {"mass", c.initial.mass},
                  {"velocity", {c.initial.velocity[0], c.initial.velocity[1], c.initial.velocity[2]}},
                  {"temperature", c.initial.temperature},
                  {"separation", c.initial.separation},
                  {"variance", c.initial.variance},
                  {"file", c.initial.file}};
  j["domain"] = {{"half_width", opt(c.domain.half_width)},
                 {"tolerance", c.domain.tolerance},
                 {"dilation", opt(c.domain.dilation)}};
  j["grid"] = {{"n", c.n}};
  j["integrator"] = {{"method", method_name(c.integrator.method)},
                     {"dt", opt(c.integrator.dt)},
                     {"cfl", c.integrator.cfl},
                     {"t_end", opt(c.integrator.t_end)},
                     {"mean_free_times", c.integrator.mean_free_times},
                     {"conserve_every_stage", c.integrator.conserve_every_stage}};
  j["output"] = {{"directory", c.output.directory}, {"every", c.output.every}, {"snapshots", c.output.snapshots}};
  j["table"] = {{"mode", table_mode_name(c.table.mode)},
                {"budget_mb", c.table.budget_mb},
                {"cache", c.table.cache},
                {"cache_dir", c.table.cache_dir}};
  return j;
}

void write_sidecar(const fs::path& file, const State& s) {
  json j = {{"format", "BSPC"},
            {"version", kSnapshotVersion},
            {"dim", s.grid().dim()},
            {"n", s.grid().n()},
            {"half_width", s.grid().half_width()},
            {"time", s.time()},
            {"nodes", "midpoint: v_i = -L + (i + 1/2) 2L/n"},
            {"layout", "row-major, axis 0 slowest, little-endian f64"}};
  std::ofstream out(fs::path(file).replace_extension(".json"));
  out << j.dump(2) << "\n";
}

}  // namespace

double mean_free_time(int dim, double lambda, double mass, double temperature) {
  const double s = std::sqrt(2.0 * temperature);
  const double moment =
      std::pow(s, lambda) * std::pow(2.0, 0.5 * lambda) * std::tgamma(0.5 * (dim + lambda)) / std::tgamma(0.5 * dim);
  return 1.0 / (mass * moment);
}

fs::path cache_dir_for(const RunConfig& cfg) {
  return cfg.table.cache_dir.empty() ? default_cache_dir() : fs::path(cfg.table.cache_dir);
}

Problem setup_problem(const RunConfig& cfg) {
  if (auto errs = validate(cfg); !errs.empty()) throw ConfigError(std::move(errs));
  const int d = cfg.physics.dim;
  KernelSpec spec = cfg.physics.angular.empty()
                        ? KernelSpec::isotropic(d, cfg.physics.lambda, cfg.physics.beta)
                        : normalize_angular(d, cfg.physics.lambda, cfg.physics.beta, cfg.physics.angular);
  spec = spec.with_truncation(cfg.physics.truncation);

  GridPtr grid;
  DomainChoice domain;
  double dilation = 1.0;
  std::optional<State> raw;
  if (*cfg.initial.kind == InitialKind::File) {
    State snap = read_snapshot(cfg.initial.file);
    if (snap.grid().dim() != d) throw Error("initial file has dimension " + std::to_string(snap.grid().dim()));
    if (snap.grid().n() != cfg.n) throw Error("initial file has n = " + std::to_string(snap.grid().n()));
    grid = snap.grid_ptr();
    domain.half_width = grid->half_width();
    raw.emplace(grid, std::vector<double>(snap.values().begin(), snap.values().end()), snap.time());
  } else {
    const Invariants inv = analytic_invariants(cfg);
    const Density f0 = initial_density(cfg);
    const double reach = *cfg.initial.kind == InitialKind::TwoGaussian ? cfg.initial.separation : 0.0;
    dilation = cfg.domain.dilation ? *cfg.domain.dilation : sampled_dilation(f0, inv, d, reach);
    if (cfg.domain.half_width) {
      domain.half_width = *cfg.domain.half_width;
    } else {
      DomainRequest req;
      req.dim = d;
      req.mass = inv.mass;
      req.mean_velocity = inv.velocity;
      req.temperature = inv.temperature;
      req.dilation = dilation;
      req.tolerance = cfg.domain.tolerance;
      domain = choose_domain(req);
    }
    grid = std::make_shared<VelocityGrid>(d, domain.half_width, cfg.n);
    std::vector<double> values(grid->size());
    for (std::size_t j = 0; j < values.size(); ++j) values[j] = f0(grid->velocity(j));
    raw.emplace(grid, std::move(values));
  }
  // The scheme evolves band-limited data; start from Pi^N g0.
  State initial = project(*raw, collision_band(*grid));
  State equilibrium = equilibrium_of(initial);
  const MomentSet m = moments(initial);
  const double T0 = m.temperature(d);
  if (!(m.mass > 0.0) || !(T0 > 0.0)) throw Error("initial state must have positive mass and temperature");
  const double tau = mean_free_time(d, cfg.physics.lambda, m.mass, T0);
  const double t_end = cfg.integrator.t_end ? *cfg.integrator.t_end : cfg.integrator.mean_free_times * tau;
  return Problem{cfg, grid, spec, std::move(initial), std::move(equilibrium), domain, dilation, tau, t_end};
}

std::shared_ptr<const CollisionWorkspace> problem_workspace(const Problem& p, std::ostream& log) {
  TableOptions opts;
  opts.mode = p.config.table.mode;
  opts.memory_budget_mb = p.config.table.budget_mb;
  if (p.config.table.cache) opts.cache_dir = cache_dir_for(p.config);
  const auto start = std::chrono::steady_clock::now();
  auto table = build_weight_table(*p.grid, p.spec, opts);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (table->loaded_from_cache())
    log << "weight table: cache hit (" << (*opts.cache_dir / table_cache_name(*p.grid, p.spec, opts)).string() << ")\n";
  else
    log << "weight table: built " << table->unique_entries() << " distinct entries in " << secs << " s ("
        << table_mode_name(table->mode()) << ")\n";
  return std::make_shared<CollisionWorkspace>(p.grid, p.spec, std::move(table));
}

RunOutcome execute(const RunConfig& cfg, std::ostream& log) {
  Problem p = setup_problem(cfg);
  const int d = p.grid->dim();
  const fs::path dir = cfg.output.directory;
  fs::create_directories(dir);
  log << "domain: L = " << g17(p.grid->half_width()) << " (dilation " << p.dilation
      << (p.domain.support_limited ? ", support limited" : "") << "), n = " << p.grid->n() << "\n";

  auto ws = problem_workspace(p, log);
  const bool elastic = p.spec.beta() == 1.0;
  const ConstraintSystem cs = build_constraints(p.grid, elastic ? ConstraintKind::Elastic : ConstraintKind::Inelastic);

  const fs::path csv_path = dir / "timeseries.csv";
  std::ofstream csv(csv_path);
  if (!csv) throw Error("cannot write " + csv_path.string());
  csv << "# conboltz-timeseries v1 " << timestamp() << "\n";
  csv << "t,mass";
  const char* axes[3] = {"momentum_x", "momentum_y", "momentum_z"};
  for (int a = 0; a < d; ++a) csv << "," << axes[a];
  csv << ",energy,L2_error_vs_M0,neg_mass,entropy\n";
  const double m0_norm = l2_norm(*p.grid, p.equilibrium.values());
  (void)m0_norm;
  const DiagnosticSink writer = [&](const State& s, std::size_t) {
    const MomentSet m = moments(s);
    csv << g17(s.time()) << "," << g17(m.mass);
    for (int a = 0; a < d; ++a) csv << "," << g17(m.momentum[a]);
    csv << "," << g17(m.energy) << "," << g17(error_norms(s, p.equilibrium, 0.0, {0, 0, 0}).l2_k) << ","
        << g17(negative_part_norm(s)) << "," << g17(entropy(s)) << "\n";
    csv.flush();
  };
  const DiagnosticSink sinks[1] = {writer};

  IntegratorConfig ic;
  ic.method = cfg.integrator.method;
  ic.dt = cfg.integrator.dt;
  ic.cfl = cfg.integrator.cfl;
  ic.t_end = p.t_end;
  ic.conserve_every_stage = cfg.integrator.conserve_every_stage;
  ic.diagnostic_every = cfg.output.every;

  if (cfg.output.snapshots) {
    write_snapshot(dir / "initial.bspc", p.initial);
  }
  RunOutcome out{run(p.initial, ic, *ws, cs, sinks), 0.0, 0.0};
  const auto& series = out.summary.series;
  for (const auto& m : series) out.max_drift = std::max(out.max_drift, max_relative_drift(series.front(), m, d, elastic));
  out.final_error_vs_equilibrium = error_norms(out.summary.final_state, p.equilibrium, 0.0, {0, 0, 0}).l2_k;
  if (cfg.output.snapshots) write_snapshot(dir / "final.bspc", out.summary.final_state);

  json manifest;
  manifest["config"] = config_json(cfg);
  manifest["resolved"] = {{"half_width", p.grid->half_width()},
                          {"support_limited", p.domain.support_limited},
                          {"dilation", p.dilation},
                          {"mean_free_time", p.mean_free_time},
                          {"t_end", p.t_end},
                          {"dt", out.summary.dt},
                          {"steps", out.summary.steps},
                          {"truncation_radius", truncation_radius(*p.grid, p.spec)},
                          {"table_mode", table_mode_name(ws->table().mode())},
                          {"table_cache_hit", ws->table().loaded_from_cache()}};
  manifest["result"] = {{"aborted", out.summary.aborted},
                        {"abort_reason", out.summary.abort_reason},
                        {"max_invariant_drift", out.max_drift},
                        {"final_L2_error_vs_M0", out.final_error_vs_equilibrium},
                        {"wall_seconds", out.summary.wall_seconds}};
  std::ofstream(dir / "manifest.json") << manifest.dump(2) << "\n";

  log << "run: " << out.summary.steps << " steps of dt = " << g17(out.summary.dt) << " to t = "
      << g17(out.summary.final_state.time()) << ", drift " << out.max_drift << ", |g - M0|_2 = "
      << out.final_error_vs_equilibrium << ", " << out.summary.wall_seconds << " s\n";
  if (out.summary.aborted) log << "run aborted: " << out.summary.abort_reason << "\n";
  return out;
}

int cmd_run(const RunConfig& cfg, std::ostream& log) {
  const RunOutcome out = execute(cfg, log);
  return out.summary.aborted ? 2 : 0;
}

SweepAxis parse_axis(const std::string& s) {
  if (s == "N" || s == "n") return SweepAxis::N;
  if (s == "L") return SweepAxis::L;
  if (s == "dt") return SweepAxis::Dt;
  throw Error("sweep axis must be N, L or dt, got '" + s + "'");
}

const char* axis_name(SweepAxis a) {
  switch (a) {
    case SweepAxis::N: return "N";
    case SweepAxis::L: return "L";
    case SweepAxis::Dt: return "dt";
  }
  return "?";
}

namespace {

std::string one_line(std::string s) {
  // Keep the status a single CSV field.
  for (char& c : s)
    if (c == '\n' || c == ',') c = ';';
  return s;
}

// Sample the Fourier series of `ref` at the nodes of `target`.
std::vector<double> resample(const State& ref, const VelocityGrid& target) {
  if (ref.grid().same_as(target)) return {ref.values().begin(), ref.values().end()};
  const auto c = ref.coeffs();
  std::vector<double> out(target.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = ref.grid().evaluate_series(c, target.velocity(j));
  return out;
}

double distance(const State& s, const State& ref) {
  const auto r = resample(ref, s.grid());
  std::vector<double> diff(r.size());
  for (std::size_t j = 0; j < diff.size(); ++j) diff[j] = s.values()[j] - r[j];
  return l2_norm(s.grid(), diff);
}

struct SweepRow {
  double value = 0.0;
  bool ok = false;
  std::string error;
  std::string log;
  std::optional<RunOutcome> outcome;
};

}  // namespace

int cmd_sweep(const RunConfig& base, SweepAxis axis, const std::vector<double>& values, bool parallel,
              std::ostream& log) {
  if (values.empty()) throw Error("sweep needs at least one value");
  const fs::path root = base.output.directory;
  fs::create_directories(root);
  std::vector<SweepRow> rows(values.size());
  const auto one = [&](std::size_t i) {
    SweepRow& row = rows[i];
    row.value = values[i];
    RunConfig cfg = base;
    switch (axis) {
      case SweepAxis::N: cfg.n = static_cast<int>(values[i]); break;
      case SweepAxis::L: cfg.domain.half_width = values[i]; break;
      case SweepAxis::Dt: cfg.integrator.dt = values[i]; break;
    }
    cfg.output.directory = (root / (std::string("sweep-") + axis_name(axis) + "-" + g17(values[i]))).string();
    std::ostringstream os;
    try {
      row.outcome = execute(cfg, os);
      row.ok = !row.outcome->summary.aborted;
      if (!row.ok) row.error = row.outcome->summary.abort_reason;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    row.log = os.str();
  };
  if (parallel) {
    std::vector<std::future<void>> jobs;
    for (std::size_t i = 0; i < values.size(); ++i) jobs.push_back(std::async(std::launch::async, one, i));
    for (auto& j : jobs) j.get();
  } else {
    for (std::size_t i = 0; i < values.size(); ++i) one(i);
  }

  // Reference: finest run (largest N or L, smallest dt).
  std::optional<std::size_t> ref;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].ok) continue;
    if (!ref) {
      ref = i;
      continue;
    }
    const bool finer = axis == SweepAxis::Dt ? rows[i].value < rows[*ref].value : rows[i].value > rows[*ref].value;
    if (finer) ref = i;
  }

  // Observed order on the dt axis from consecutive differences.
  std::vector<std::optional<double>> order(rows.size());
  if (axis == SweepAxis::Dt) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (rows[i].ok) idx.push_back(i);
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return rows[a].value > rows[b].value; });
    std::vector<double> diffs;
    for (std::size_t k = 0; k + 1 < idx.size(); ++k)
      diffs.push_back(distance(rows[idx[k]].outcome->summary.final_state, rows[idx[k + 1]].outcome->summary.final_state));
    for (std::size_t k = 0; k + 1 < diffs.size(); ++k) {
      const double h0 = rows[idx[k]].outcome->summary.dt, h1 = rows[idx[k + 1]].outcome->summary.dt;
      if (diffs[k] > 0.0 && diffs[k + 1] > 0.0) order[idx[k]] = std::log(diffs[k] / diffs[k + 1]) / std::log(h0 / h1);
    }
  }

  const fs::path table_path = root / (std::string("sweep-") + axis_name(axis) + ".csv");
  std::ofstream table(table_path);
  std::ostringstream head;
  head << "value,n,L,dt,steps,l2_error_vs_ref,l2_error_vs_M0,max_invariant_drift,wall_seconds,observed_order,status\n";
  table << head.str();
  log << head.str();
  int failures = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    log << r.log;
    std::ostringstream line;
    line << g17(r.value) << ",";
    if (r.outcome) {
      const auto& s = r.outcome->summary;
      const double vs_ref = ref ? distance(s.final_state, rows[*ref].outcome->summary.final_state) : NAN;
      line << s.final_state.grid().n() << "," << g17(s.final_state.grid().half_width()) << "," << g17(s.dt) << ","
           << s.steps << "," << g17(vs_ref) << "," << g17(r.outcome->final_error_vs_equilibrium) << ","
           << g17(r.outcome->max_drift) << "," << g17(s.wall_seconds) << ",";
    } else {
      line << ",,,,,,,,";
    }
    line << (order[i] ? g17(*order[i]) : std::string()) << "," << (r.ok ? "ok" : "failed: " + one_line(r.error)) << "\n";
    if (!r.ok) ++failures;
    table << line.str();
    log << line.str();
  }
  log << "sweep table written to " << table_path.string() << "\n";
  return failures == 0 ? 0 : 2;
}

int cmd_table_build(const RunConfig& cfg, std::ostream& log) {
  RunConfig c = cfg;
  c.table.cache = true;
  const Problem p = setup_problem(c);
  problem_workspace(p, log);
  return 0;
}

int cmd_table_clear(const fs::path& dir, std::ostream& log) {
  const std::size_t n = clear_table_cache(dir);
  log << "removed " << n << " cached table(s) from " << dir.string() << "\n";
  return 0;
}

void write_snapshot(const fs::path& file, const State& s) {
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write snapshot " + file.string());
  const auto put = [&](const auto& x) { out.write(reinterpret_cast<const char*>(&x), sizeof x); };
  out.write(kSnapshotMagic, 4);
  put(kSnapshotVersion);
  put(static_cast<std::uint32_t>(s.grid().dim()));
  put(static_cast<std::uint32_t>(s.grid().n()));
  put(s.grid().half_width());
  put(s.time());
  out.write(reinterpret_cast<const char*>(s.values().data()), static_cast<std::streamsize>(s.values().size() * 8));
  if (!out) throw Error("cannot write snapshot " + file.string());
  write_sidecar(file, s);
}

State read_snapshot(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error("cannot read snapshot " + file.string());
  char magic[4];
  std::uint32_t version = 0, d = 0, n = 0;
  double L = 0.0, t = 0.0;
  const auto get = [&](auto& x) { return static_cast<bool>(in.read(reinterpret_cast<char*>(&x), sizeof x)); };
  if (!in.read(magic, 4) || std::string(magic, 4) != "BSPC") throw Error(file.string() + " is not a BSPC snapshot");
  if (!get(version) || version != kSnapshotVersion) throw Error(file.string() + ": unsupported snapshot version");
  if (!get(d) || !get(n) || !get(L) || !get(t)) throw Error(file.string() + ": truncated header");
  auto grid = std::make_shared<VelocityGrid>(static_cast<int>(d), L, static_cast<int>(n));
  std::vector<double> values(grid->size());
  if (!in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(values.size() * 8)))
    throw Error(file.string() + ": truncated data");
  return State(grid, std::move(values), t);
}

}  // namespace conboltz
