#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "conboltz/config.hpp"
#include "conboltz/integrate.hpp"

namespace conboltz {

/// A configuration resolved into concrete objects: grid, kernel, projected
/// initial state and the Maxwellian built from its invariants.
struct Problem {
  RunConfig config;
  GridPtr grid;
  KernelSpec spec;
  State initial;
  State equilibrium;
  DomainChoice domain;
  double dilation = 1.0;
  double mean_free_time = 0.0;
  double t_end = 0.0;
};

Problem setup_problem(const RunConfig& cfg);

/// 1 / (m0 E|u|^lambda) for the relative velocity of two draws from M[m0, ., T0].
double mean_free_time(int dim, double lambda, double mass, double temperature);

std::shared_ptr<const CollisionWorkspace> problem_workspace(const Problem& p, std::ostream& log);

struct RunOutcome {
  RunSummary summary;
  double max_drift = 0.0;
  double final_error_vs_equilibrium = 0.0;
};

/// Full run: builds everything, integrates and writes the outputs into
/// cfg.output.directory.
RunOutcome execute(const RunConfig& cfg, std::ostream& log);

int cmd_run(const RunConfig& cfg, std::ostream& log);

enum class SweepAxis { N, L, Dt };
SweepAxis parse_axis(const std::string& s);
const char* axis_name(SweepAxis a);
int cmd_sweep(const RunConfig& cfg, SweepAxis axis, const std::vector<double>& values, bool parallel,
              std::ostream& log);

int cmd_table_build(const RunConfig& cfg, std::ostream& log);
int cmd_table_clear(const std::filesystem::path& dir, std::ostream& log);
std::filesystem::path cache_dir_for(const RunConfig& cfg);

/// "BSPC" snapshot: u32 version, u32 d, u32 n, f64 L, f64 t, n^d f64 values
/// (row-major, axis 0 slowest), little endian. A JSON sidecar sits next to it.
void write_snapshot(const std::filesystem::path& file, const State& s);
State read_snapshot(const std::filesystem::path& file);

}  // namespace conboltz
