#include "conboltz/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace conboltz {

ConfigError::ConfigError(std::vector<std::string> msgs)
    : Error([&] {
        std::string all = "invalid configuration:";
        for (const auto& m : msgs) all += "\n  " + m;
        return all;
      }()),
      messages(std::move(msgs)) {}

const char* initial_name(InitialKind k) {
  switch (k) {
    case InitialKind::Maxwellian: return "maxwellian";
    case InitialKind::TwoGaussian: return "two-gaussian";
    case InitialKind::File: return "file";
  }
  return "?";
}

const char* table_mode_name(TableMode m) {
  switch (m) {
    case TableMode::Full: return "full";
    case TableMode::Reduced: return "reduced";
    case TableMode::Automatic: return "auto";
  }
  return "?";
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::optional<double> to_double(const std::string& s) {
  double x = 0.0;
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, x);
  if (ec != std::errc() || p != end || !std::isfinite(x)) return std::nullopt;
  return x;
}

std::optional<std::vector<double>> to_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto x = to_double(trim(item));
    if (!x) return std::nullopt;
    out.push_back(*x);
  }
  if (out.empty()) return std::nullopt;
  return out;
}

using Setter = std::function<std::string(RunConfig&, const std::string&)>;

template <class F>
Setter num(F assign) {
  return [assign](RunConfig& c, const std::string& v) -> std::string {
    auto x = to_double(v);
    if (!x) return "expected a number, got '" + v + "'";
    assign(c, *x);
    return {};
  };
}

template <class F>
Setter num_or_auto(F assign) {
  return [assign](RunConfig& c, const std::string& v) -> std::string {
    if (v == "auto") {
      assign(c, std::nullopt);
      return {};
    }
    auto x = to_double(v);
    if (!x) return "expected a number or 'auto', got '" + v + "'";
    assign(c, *x);
    return {};
  };
}

template <class F>
Setter integer(F assign) {
  return [assign](RunConfig& c, const std::string& v) -> std::string {
    auto x = to_double(v);
    if (!x || *x != std::floor(*x) || std::abs(*x) > 1e9) return "expected an integer, got '" + v + "'";
    assign(c, static_cast<int>(*x));
    return {};
  };
}

template <class F>
Setter boolean(F assign) {
  return [assign](RunConfig& c, const std::string& v) -> std::string {
    if (v == "true" || v == "yes" || v == "on") assign(c, true);
    else if (v == "false" || v == "no" || v == "off") assign(c, false);
    else return "expected true or false, got '" + v + "'";
    return {};
  };
}

template <class F>
Setter text(F assign) {
  return [assign](RunConfig& c, const std::string& v) -> std::string {
    assign(c, v);
    return {};
  };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"physics.dim", integer([](RunConfig& c, int x) { c.physics.dim = x; })},
      {"physics.lambda", num([](RunConfig& c, double x) { c.physics.lambda = x; })},
      {"physics.beta", num([](RunConfig& c, double x) { c.physics.beta = x; })},
      {"physics.truncation", num([](RunConfig& c, double x) { c.physics.truncation = x; })},
      {"physics.angular",
       [](RunConfig& c, const std::string& v) -> std::string {
         if (v == "isotropic") {
           c.physics.angular.clear();
           return {};
         }
         auto xs = to_list(v);
         if (!xs) return "expected 'isotropic' or a comma-separated list of samples, got '" + v + "'";
         c.physics.angular = *xs;
         return {};
       }},
      {"initial.type",
       [](RunConfig& c, const std::string& v) -> std::string {
         if (v == "maxwellian") c.initial.kind = InitialKind::Maxwellian;
         else if (v == "two-gaussian") c.initial.kind = InitialKind::TwoGaussian;
         else if (v == "file") c.initial.kind = InitialKind::File;
         else return "expected maxwellian, two-gaussian or file, got '" + v + "'";
         return {};
       }},
      {"initial.mass", num([](RunConfig& c, double x) { c.initial.mass = x; })},
      {"initial.temperature", num([](RunConfig& c, double x) { c.initial.temperature = x; })},
      {"initial.separation", num([](RunConfig& c, double x) { c.initial.separation = x; })},
      {"initial.variance", num([](RunConfig& c, double x) { c.initial.variance = x; })},
      {"initial.file", text([](RunConfig& c, const std::string& x) { c.initial.file = x; })},
      {"initial.velocity",
       [](RunConfig& c, const std::string& v) -> std::string {
         auto xs = to_list(v);
         if (!xs || xs->size() > 3) return "expected up to three comma-separated numbers, got '" + v + "'";
         c.initial.velocity = {0.0, 0.0, 0.0};
         for (std::size_t i = 0; i < xs->size(); ++i) c.initial.velocity[i] = (*xs)[i];
         return {};
       }},
      {"domain.half_width", num_or_auto([](RunConfig& c, std::optional<double> x) { c.domain.half_width = x; })},
      {"domain.tolerance", num([](RunConfig& c, double x) { c.domain.tolerance = x; })},
      {"domain.dilation", num_or_auto([](RunConfig& c, std::optional<double> x) { c.domain.dilation = x; })},
      {"grid.n", integer([](RunConfig& c, int x) { c.n = x; })},
      {"integrator.method",
       [](RunConfig& c, const std::string& v) -> std::string {
         if (v == "euler") c.integrator.method = Method::Euler;
         else if (v == "rk2") c.integrator.method = Method::RK2;
         else if (v == "rk4") c.integrator.method = Method::RK4;
         else return "expected euler, rk2 or rk4, got '" + v + "'";
         return {};
       }},
      {"integrator.dt", num_or_auto([](RunConfig& c, std::optional<double> x) { c.integrator.dt = x; })},
      {"integrator.cfl", num([](RunConfig& c, double x) { c.integrator.cfl = x; })},
      {"integrator.t_end", num_or_auto([](RunConfig& c, std::optional<double> x) { c.integrator.t_end = x; })},
      {"integrator.mean_free_times", num([](RunConfig& c, double x) { c.integrator.mean_free_times = x; })},
      {"integrator.conserve_every_stage", boolean([](RunConfig& c, bool x) { c.integrator.conserve_every_stage = x; })},
      {"output.directory", text([](RunConfig& c, const std::string& x) { c.output.directory = x; })},
      {"output.every", integer([](RunConfig& c, int x) { c.output.every = x; })},
      {"output.snapshots", boolean([](RunConfig& c, bool x) { c.output.snapshots = x; })},
      {"table.mode",
       [](RunConfig& c, const std::string& v) -> std::string {
         if (v == "auto") c.table.mode = TableMode::Automatic;
         else if (v == "full") c.table.mode = TableMode::Full;
         else if (v == "reduced") c.table.mode = TableMode::Reduced;
         else return "expected auto, full or reduced, got '" + v + "'";
         return {};
       }},
      {"table.budget_mb", num([](RunConfig& c, double x) { c.table.budget_mb = x; })},
      {"table.cache", boolean([](RunConfig& c, bool x) { c.table.cache = x; })},
      {"table.cache_dir", text([](RunConfig& c, const std::string& x) { c.table.cache_dir = x; })},
  };
  return table;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

std::vector<std::string> validate(const RunConfig& c) {
  std::vector<std::string> e;
  const auto bad = [&](const std::string& key, const std::string& why) { e.push_back(key + ": " + why); };
  if (c.physics.dim != 2 && c.physics.dim != 3) bad("physics.dim", "must be 2 or 3, got " + std::to_string(c.physics.dim));
  if (!(c.physics.lambda >= 0.0 && c.physics.lambda <= 1.0))
    bad("physics.lambda", "must lie in [0, 1], got " + fmt(c.physics.lambda));
  if (!(c.physics.beta > 0.5 && c.physics.beta <= 1.0))
    bad("physics.beta", "must lie in (1/2, 1], got " + fmt(c.physics.beta));
  if (!(c.physics.truncation > 0.0)) bad("physics.truncation", "must be positive, got " + fmt(c.physics.truncation));
  for (double x : c.physics.angular)
    if (x < 0.0) {
      bad("physics.angular", "samples must be nonnegative, got " + fmt(x));
      break;
    }
  if (!c.initial.kind) {
    bad("initial.type", "is required (maxwellian, two-gaussian or file)");
  } else {
    if (*c.initial.kind != InitialKind::File && !(c.initial.mass > 0.0))
      bad("initial.mass", "must be positive, got " + fmt(c.initial.mass));
    if (*c.initial.kind == InitialKind::Maxwellian && !(c.initial.temperature > 0.0))
      bad("initial.temperature", "must be positive, got " + fmt(c.initial.temperature));
    if (*c.initial.kind == InitialKind::TwoGaussian && !(c.initial.variance > 0.0))
      bad("initial.variance", "must be positive, got " + fmt(c.initial.variance));
    if (*c.initial.kind == InitialKind::File && c.initial.file.empty()) bad("initial.file", "is required for type = file");
  }
  if (c.domain.half_width && !(*c.domain.half_width > 0.0))
    bad("domain.half_width", "must be positive, got " + fmt(*c.domain.half_width));
  if (!(c.domain.tolerance > 0.0 && c.domain.tolerance < 1.0))
    bad("domain.tolerance", "must lie in (0, 1), got " + fmt(c.domain.tolerance));
  if (c.domain.dilation && !(*c.domain.dilation >= 1.0))
    bad("domain.dilation", "must be >= 1, got " + fmt(*c.domain.dilation));
  if (c.n < 8 || c.n % 2 != 0) bad("grid.n", "must be even and >= 8, got " + std::to_string(c.n));
  if (c.integrator.dt && !(*c.integrator.dt > 0.0)) bad("integrator.dt", "must be positive, got " + fmt(*c.integrator.dt));
  if (!(c.integrator.cfl > 0.0)) bad("integrator.cfl", "must be positive, got " + fmt(c.integrator.cfl));
  if (c.integrator.t_end && !(*c.integrator.t_end >= 0.0))
    bad("integrator.t_end", "must be nonnegative, got " + fmt(*c.integrator.t_end));
  if (!(c.integrator.mean_free_times > 0.0))
    bad("integrator.mean_free_times", "must be positive, got " + fmt(c.integrator.mean_free_times));
  if (c.output.every < 1) bad("output.every", "must be at least 1, got " + std::to_string(c.output.every));
  if (c.output.directory.empty()) bad("output.directory", "must not be empty");
  if (!(c.table.budget_mb > 0.0)) bad("table.budget_mb", "must be positive, got " + fmt(c.table.budget_mb));
  return e;
}

RunConfig parse_config(const std::string& input) {
  RunConfig cfg;
  std::vector<std::string> errors;
  std::istringstream in(input);
  std::string raw, section;
  int lineno = 0;
  std::map<std::string, int> seen;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line.resize(i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') {
        errors.push_back(where + "malformed section header '" + line + "'");
        continue;
      }
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back(where + "expected 'key = value', got '" + line + "'");
      continue;
    }
    std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    const std::string full = key.find('.') == std::string::npos && !section.empty() ? section + "." + key : key;
    auto it = setters().find(full);
    if (it == setters().end()) {
      errors.push_back(where + "unknown key '" + full + "'");
      continue;
    }
    if (auto [pos, fresh] = seen.emplace(full, lineno); !fresh) {
      errors.push_back(where + "'" + full + "' already set on line " + std::to_string(pos->second));
      continue;
    }
    if (auto msg = it->second(cfg, value); !msg.empty()) errors.push_back(where + full + ": " + msg);
  }
  for (auto& m : validate(cfg)) errors.push_back(std::move(m));
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_text(const RunConfig& c) {
  std::ostringstream os;
  os.precision(17);
  const auto opt = [](const std::optional<double>& x) { return x ? fmt(*x) : std::string("auto"); };
  os << "[physics]\n"
     << "dim = " << c.physics.dim << "\n"
     << "lambda = " << fmt(c.physics.lambda) << "\n"
     << "beta = " << fmt(c.physics.beta) << "\n"
     << "truncation = " << fmt(c.physics.truncation) << "\n";
  os << "angular = ";
  if (c.physics.angular.empty()) {
    os << "isotropic";
  } else {
    for (std::size_t i = 0; i < c.physics.angular.size(); ++i) os << (i ? ", " : "") << fmt(c.physics.angular[i]);
  }
  os << "\n\n[initial]\n";
  if (c.initial.kind) os << "type = " << initial_name(*c.initial.kind) << "\n";
  os << "mass = " << fmt(c.initial.mass) << "\n"
     << "velocity = " << fmt(c.initial.velocity[0]) << ", " << fmt(c.initial.velocity[1]) << ", "
     << fmt(c.initial.velocity[2]) << "\n"
     << "temperature = " << fmt(c.initial.temperature) << "\n"
     << "separation = " << fmt(c.initial.separation) << "\n"
     << "variance = " << fmt(c.initial.variance) << "\n";
  if (!c.initial.file.empty()) os << "file = \"" << c.initial.file << "\"\n";
  os << "\n[domain]\n"
     << "half_width = " << opt(c.domain.half_width) << "\n"
     << "tolerance = " << fmt(c.domain.tolerance) << "\n"
     << "dilation = " << opt(c.domain.dilation) << "\n";
  os << "\n[grid]\nn = " << c.n << "\n";
  os << "\n[integrator]\n"
     << "method = " << method_name(c.integrator.method) << "\n"
     << "dt = " << opt(c.integrator.dt) << "\n"
     << "cfl = " << fmt(c.integrator.cfl) << "\n"
     << "t_end = " << opt(c.integrator.t_end) << "\n"
     << "mean_free_times = " << fmt(c.integrator.mean_free_times) << "\n"
     << "conserve_every_stage = " << (c.integrator.conserve_every_stage ? "true" : "false") << "\n";
  os << "\n[output]\n"
     << "directory = \"" << c.output.directory << "\"\n"
     << "every = " << c.output.every << "\n"
     << "snapshots = " << (c.output.snapshots ? "true" : "false") << "\n";
  os << "\n[table]\n"
     << "mode = " << table_mode_name(c.table.mode) << "\n"
     << "budget_mb = " << fmt(c.table.budget_mb) << "\n"
     << "cache = " << (c.table.cache ? "true" : "false") << "\n";
  if (!c.table.cache_dir.empty()) os << "cache_dir = \"" << c.table.cache_dir << "\"\n";
  return os.str();
}

}  // namespace conboltz
