#pragma once

#include <optional>
#include <string>
#include <vector>

#include "conboltz/grid.hpp"
#include "conboltz/integrate.hpp"
#include "conboltz/kernel.hpp"

namespace conboltz {

enum class InitialKind { Maxwellian, TwoGaussian, File };

struct RunConfig {
  struct Physics {
    int dim = 3;
    double lambda = 1.0;
    double beta = 1.0;
    std::vector<double> angular;  // empty: isotropic
    double truncation = alias_free_truncation;  // kernel cut-off radius / L
  } physics;

  struct Initial {
    std::optional<InitialKind> kind;
    double mass = 1.0;
    Vec velocity{0.0, 0.0, 0.0};
    double temperature = 1.0;   // maxwellian
    double separation = 1.0;    // two-gaussian: centres at velocity +- separation e_1
    double variance = 2.0 / 3.0;
    std::string file;
  } initial;

  struct Domain {
    std::optional<double> half_width;  // empty: choose_domain
    double tolerance = 1e-4;
    std::optional<double> dilation;    // empty: sampled sup f0 / M
  } domain;

  int n = 16;

  struct Integrator {
    Method method = Method::RK4;
    std::optional<double> dt;
    double cfl = 0.1;
    std::optional<double> t_end;  // empty: mean_free_times * tau
    double mean_free_times = 5.0;
    bool conserve_every_stage = true;
  } integrator;

  struct Output {
    std::string directory = "conboltz-out";
    int every = 1;
    bool snapshots = true;
  } output;

  struct Table {
    TableMode mode = TableMode::Automatic;
    double budget_mb = 1024.0;
    bool cache = true;
    std::string cache_dir;  // empty: default_cache_dir()
  } table;
};

struct ConfigError : Error {
  ConfigError(std::vector<std::string> msgs);
  std::vector<std::string> messages;
};

/// Parses `[section]` headers and `key = value` lines (`#` starts a comment).
/// Throws ConfigError listing every problem found.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Checks ranges and cross-field rules; returns the problems found.
std::vector<std::string> validate(const RunConfig& cfg);

/// Resolved configuration as `key = value` text that parse_config accepts.
std::string to_text(const RunConfig& cfg);

const char* initial_name(InitialKind k);
const char* table_mode_name(TableMode m);

}  // namespace conboltz
