#include <CLI11.hpp>

#include <iostream>
#include <sstream>

#include "conboltz/app.hpp"

namespace {

std::vector<double> parse_values(const std::string& list) {
  std::vector<double> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const double x = std::stod(item, &used);
    if (used != item.size()) throw conboltz::Error("bad sweep value '" + item + "'");
    out.push_back(x);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral solver for the space-homogeneous Boltzmann equation"};
  app.require_subcommand(1);

  std::string config_path, axis, values, clear_dir;
  bool parallel = false;

  auto* run = app.add_subcommand("run", "Integrate one configuration");
  run->add_option("config", config_path, "Configuration file")->required()->check(CLI::ExistingFile);

  auto* sweep = app.add_subcommand("sweep", "Convergence sweep over N, L or dt");
  sweep->add_option("config", config_path, "Base configuration file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--axis", axis, "N, L or dt")->required()->check(CLI::IsMember({"N", "L", "dt"}));
  sweep->add_option("--values", values, "Comma-separated values")->required();
  sweep->add_flag("--parallel", parallel, "Run the sweep points concurrently");

  auto* cache = app.add_subcommand("table-cache", "Manage cached weight tables");
  cache->require_subcommand(1);
  auto* build = cache->add_subcommand("build", "Build and cache the table for a configuration");
  build->add_option("config", config_path, "Configuration file")->required()->check(CLI::ExistingFile);
  auto* clear = cache->add_subcommand("clear", "Delete cached tables");
  clear->add_option("--dir", clear_dir, "Cache directory (default: CONBOLTZ_CACHE_DIR or ~/.cache/conboltz)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return conboltz::cmd_run(conboltz::load_config(config_path), std::cout);
    if (*sweep)
      return conboltz::cmd_sweep(conboltz::load_config(config_path), conboltz::parse_axis(axis),
                                 parse_values(values), parallel, std::cout);
    if (*build) return conboltz::cmd_table_build(conboltz::load_config(config_path), std::cout);
    if (*clear)
      return conboltz::cmd_table_clear(clear_dir.empty() ? conboltz::default_cache_dir() : std::filesystem::path(clear_dir), std::cout);
  } catch (const conboltz::ConfigError& e) {
    std::cerr << "configuration error:\n";
    for (const auto& m : e.messages) std::cerr << "  " << m << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
