#pragma once

#include <cstdint>
#include <vector>

#include "drmpc/domain.hpp"
#include "drmpc/trace.hpp"

namespace drmpc {

struct MpcConfig {
  int receding_horizon = 35;  // N, days
  int branching_depth = 4;    // n <= N
  std::uint64_t master_seed = 1;
  int final_day = 0;  // T

  void validate() const;
};

// Everything a day-solve needs besides the carry state.
struct MpcInputs {
  BatterySpec battery;
  CustomerProfile profile;
  TariffSchedule tariff;
  DrProgramSpec dr_spec;
  EventProcess events;

  void validate() const;  // cross-checks all horizon lengths
};

struct DayResult {
  DaySchedule schedule;
  double objective = 0.0;
  int tree_nodes = 0;
  long iterations = 0;
  int horizon_used = 0;
  int depth_used = 0;
};

// Solves one receding-horizon stage: clamp (n, N) to the final day, build
// the tree (seeded from hash(master_seed, day)), build and solve the LP,
// and commit the root-day schedule. Solver failures are internal errors:
// the LP is always feasible with an idle battery.
DayResult run_day(const CarryState& carry, int omega_today, const MpcConfig& config,
                  const MpcInputs& inputs);

// Rolls the carry state through one realized day: SOC dynamics, baseline
// history on non-event days, prior-event accumulators on event days, and
// the interval-boundary reset.
CarryState advance_state(const CarryState& carry, const DaySchedule& committed, int omega_today,
                         const MpcInputs& inputs);

// Full accounting of a fixed hourly schedule under one realization:
// hourly cash flows, per-day DR quantities, per-interval capacity payments
// (exact, non-prorated) and the total realized cost.
SimulationTrace assemble_trace(const MpcInputs& inputs, const std::vector<double>& charge,
                               const std::vector<double>& discharge,
                               const std::vector<int>& realization);

// Runs the MPC loop over days 1..T for the fixed realization in
// inputs.events (initial state: half-full battery, empty baseline).
SimulationTrace simulate(const MpcInputs& inputs, const MpcConfig& config);

}  // namespace drmpc
