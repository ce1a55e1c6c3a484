#pragma once

#include <utility>
#include <vector>

#include "drmpc/domain.hpp"
#include "drmpc/lp_problem.hpp"
#include "drmpc/lp_solver.hpp"
#include "drmpc/scenario_tree.hpp"

namespace drmpc {

enum class VarRole { Charge = 0, Discharge = 1, Soc = 2, Import = 3, Export = 4 };

// Sparse linear expression over stage-LP variables plus a constant part
// (carry-state history enters the cost as constants).
struct LinExpr {
  std::vector<std::pair<int, double>> terms;
  double constant = 0.0;
};

// Deterministic-equivalent LP for one day-solve: five variables per
// node-hour laid out node-major, power/dynamics/load-split rows per
// node-hour, and the probability-weighted modified net cost as objective.
struct StageLp {
  LpProblem problem;
  int tree_nodes = 0;
  int first_day = 0;  // absolute 1-based day of the tree root

  // Feasible starting basis: soc on dynamics rows, import or export on
  // split rows, slack on power rows.
  std::vector<int> basis_hint;

  int var_index(int node_id, int hour, VarRole role) const {
    return (node_id * 24 + hour) * 5 + static_cast<int>(role);
  }
};

// Flattens tree + carry state into the stage LP. Requires signed reduction
// mode and purchase >= export rates; throws std::invalid_argument otherwise.
StageLp build_stage_lp(const ScenarioTree& tree, const BatterySpec& battery,
                       const CustomerProfile& profile, const TariffSchedule& tariff,
                       const DrProgramSpec& dr_spec, const CarryState& carry);

// Baseline of the event day at `event_offset` on the path: the mean of the
// most recent non-event DR-window consumptions, symbolic for in-horizon
// days and constant for carry history, over however many are available.
LinExpr baseline_expression(const ScenarioTree& tree, const StageLp& stage,
                            const std::vector<int>& path, int event_offset,
                            const CarryState& carry, const DrProgramSpec& dr_spec);

// Prorated capacity payment of one interval along one leaf path:
// rate * proration * (prior + in-horizon reductions) / (prior + in-horizon
// event hours); zero when no event hours are known.
LinExpr capacity_expression(const ScenarioTree& tree, const StageLp& stage,
                            const std::vector<int>& path, const DayRange& interval, double rate,
                            const CarryState& carry, const DrProgramSpec& dr_spec,
                            int horizon_end_day);

// Reads the committed root-day schedule out of an optimal solution,
// clamping magnitudes below 1e-9 to zero.
DaySchedule extract_day_schedule(const StageLp& stage, const LpSolution& solution);

}  // namespace drmpc
