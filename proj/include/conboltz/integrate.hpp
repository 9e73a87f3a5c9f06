#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "conboltz/collision.hpp"
#include "conboltz/conserve.hpp"
#include "conboltz/diagnostics.hpp"

namespace conboltz {

enum class Method { Euler, RK2, RK4 };

struct IntegratorConfig {
  Method method = Method::RK4;
  std::optional<double> dt;  // empty: auto_dt
  double cfl = 0.1;
  double t_end = 1.0;
  bool conserve_every_stage = true;
  int diagnostic_every = 1;  // steps between sink calls
};

/// Raised when a step produces non-finite values.
struct StepError : Error {
  using Error::Error;
};

/// Q_c(g) = conserve_discrete(q_u(g)).
std::vector<double> rhs(const State& s, const CollisionWorkspace& ws, const ConstraintSystem& cs);

/// One explicit step of size dt. Every stage uses the conserved operator
/// unless conserve_every_stage is false, in which case the projection is
/// applied once to the combined increment.
State step(const State& s, double dt, Method method, const CollisionWorkspace& ws, const ConstraintSystem& cs,
           bool conserve_every_stage = true);

/// cfl / (m0 R^lambda) with R the kernel truncation radius.
double auto_dt(const State& s, const KernelSpec& spec, const VelocityGrid& grid, double cfl = 0.1);

using DiagnosticSink = std::function<void(const State&, std::size_t step)>;

struct RunSummary {
  State final_state;
  std::vector<MomentSet> series;
  double wall_seconds = 0.0;
  double dt = 0.0;
  std::size_t steps = 0;
  bool aborted = false;
  std::string abort_reason;
};

RunSummary run(const State& initial, const IntegratorConfig& cfg, const CollisionWorkspace& ws,
               const ConstraintSystem& cs, std::span<const DiagnosticSink> sinks = {});

const char* method_name(Method m);

}  // namespace conboltz
