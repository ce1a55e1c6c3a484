#include "drmpc/lp_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace drmpc {

namespace {

// Window consumption of the day at `node` as a linear expression
// sum_{h in window} (import_h - export_h).
void add_window_terms(const ScenarioTree& tree, const StageLp& stage, int node_id,
                      const DrProgramSpec& dr_spec, double scale, LinExpr& expr) {
  const int day = stage.first_day + tree.nodes[node_id].day_offset;
  for (int h : dr_spec.dr_window[day - 1]) {
    expr.terms.emplace_back(stage.var_index(node_id, h - 1, VarRole::Import), scale);
    expr.terms.emplace_back(stage.var_index(node_id, h - 1, VarRole::Export), -scale);
  }
}

}  // namespace

LinExpr baseline_expression(const ScenarioTree& tree, const StageLp& stage,
                            const std::vector<int>& path, int event_offset,
                            const CarryState& carry, const DrProgramSpec& dr_spec) {
  // most recent non-event days first: in-horizon path days, then history
  std::vector<int> symbolic_nodes;
  for (int offset = event_offset - 1; offset >= 0; --offset) {
    if (static_cast<int>(symbolic_nodes.size()) == dr_spec.baseline_days) break;
    const int node_id = path[offset];
    if (tree.nodes[node_id].event_flag == 0) symbolic_nodes.push_back(node_id);
  }
  std::vector<double> constants;
  for (auto it = carry.baseline_history.rbegin(); it != carry.baseline_history.rend(); ++it) {
    if (static_cast<int>(symbolic_nodes.size() + constants.size()) == dr_spec.baseline_days) {
      break;
    }
    constants.push_back(*it);
  }

  LinExpr expr;
  const int count = static_cast<int>(symbolic_nodes.size() + constants.size());
  if (count == 0) return expr;
  const double scale = 1.0 / count;
  for (int node_id : symbolic_nodes) add_window_terms(tree, stage, node_id, dr_spec, scale, expr);
  for (double s : constants) expr.constant += scale * s;
  return expr;
}

LinExpr capacity_expression(const ScenarioTree& tree, const StageLp& stage,
                            const std::vector<int>& path, const DayRange& interval, double rate,
                            const CarryState& carry, const DrProgramSpec& dr_spec,
                            int horizon_end_day) {
  const bool first_interval =
      interval.first_day <= stage.first_day && stage.first_day <= interval.last_day;

  double event_hours = first_interval ? carry.prior_event_hours : 0;
  std::vector<int> event_offsets;
  for (std::size_t offset = 0; offset < path.size(); ++offset) {
    const int day = stage.first_day + static_cast<int>(offset);
    if (day < interval.first_day || day > interval.last_day) continue;
    if (tree.nodes[path[offset]].event_flag == 1) {
      event_offsets.push_back(static_cast<int>(offset));
      event_hours += static_cast<double>(dr_spec.dr_window[day - 1].size());
    }
  }

  LinExpr expr;
  if (event_hours <= 0.0) return expr;  // no events known: zero payment

  const double proration =
      prorate_capacity_payment(1.0, interval.first_day, interval.last_day, horizon_end_day);
  const double scale = rate * proration / event_hours;

  if (first_interval) expr.constant += scale * carry.prior_reduction;
  for (int offset : event_offsets) {
    LinExpr base = baseline_expression(tree, stage, path, offset, carry, dr_spec);
    for (auto& [var, coef] : base.terms) expr.terms.emplace_back(var, scale * coef);
    expr.constant += scale * base.constant;
    add_window_terms(tree, stage, path[offset], dr_spec, -scale, expr);  // minus consumption
  }
  return expr;
}

StageLp build_stage_lp(const ScenarioTree& tree, const BatterySpec& battery,
                       const CustomerProfile& profile, const TariffSchedule& tariff,
                       const DrProgramSpec& dr_spec, const CarryState& carry) {
  battery.validate();
  tariff.validate();
  if (dr_spec.reduction_mode != ReductionMode::Signed) {
    throw std::invalid_argument("stage LP needs signed reduction mode; clipped reductions are "
                                "evaluation-only");
  }
  if (tree.node_count() == 0) throw std::invalid_argument("empty scenario tree");

  StageLp stage;
  stage.tree_nodes = tree.node_count();
  stage.first_day = carry.current_day;
  const int horizon_end_day = stage.first_day + tree.horizon_days - 1;
  if (horizon_end_day > profile.horizon_days || horizon_end_day > dr_spec.horizon_days()) {
    throw std::invalid_argument("tree horizon extends past the simulation horizon");
  }
  if (carry.stored_energy < -1e-9 || carry.stored_energy > battery.energy_capacity_kwh + 1e-9) {
    throw std::invalid_argument("carried stored energy outside battery bounds");
  }

  LpProblem& lp = stage.problem;
  const double power = battery.power_capacity_kw;
  const double energy = battery.energy_capacity_kwh;
  const double eff_in = battery.charge_efficiency;
  const double eff_out = battery.discharge_efficiency;

  for (int node = 0; node < tree.node_count(); ++node) {
    for (int h = 0; h < 24; ++h) {
      lp.add_variable(0.0, power, 0.0);      // charge
      lp.add_variable(0.0, power, 0.0);      // discharge
      lp.add_variable(0.0, energy, 0.0);     // soc
      lp.add_variable(0.0, kInfinity, 0.0);  // import
      lp.add_variable(0.0, kInfinity, 0.0);  // export
    }
  }

  const int num_structural = lp.num_vars();
  for (int node = 0; node < tree.node_count(); ++node) {
    const int day = stage.first_day + tree.nodes[node].day_offset;
    for (int h = 0; h < 24; ++h) {
      const int abs_hour = (day - 1) * 24 + h;
      const int charge = stage.var_index(node, h, VarRole::Charge);
      const int discharge = stage.var_index(node, h, VarRole::Discharge);
      const int soc = stage.var_index(node, h, VarRole::Soc);
      const int import_v = stage.var_index(node, h, VarRole::Import);
      const int export_v = stage.var_index(node, h, VarRole::Export);

      lp.add_row({charge, discharge}, {1.0, 1.0}, RowSense::LessEqual, power);
      stage.basis_hint.push_back(num_structural + lp.num_rows() - 1);

      if (node == 0 && h == 0) {
        lp.add_row({soc, charge, discharge}, {1.0, -eff_in, 1.0 / eff_out}, RowSense::Equal,
                   carry.stored_energy);
      } else {
        const int prev_soc = h == 0 ? stage.var_index(tree.nodes[node].parent, 23, VarRole::Soc)
                                    : stage.var_index(node, h - 1, VarRole::Soc);
        lp.add_row({soc, prev_soc, charge, discharge}, {1.0, -1.0, -eff_in, 1.0 / eff_out},
                   RowSense::Equal, 0.0);
      }
      stage.basis_hint.push_back(soc);

      const double net = profile.demand[abs_hour] - profile.solar[abs_hour];
      lp.add_row({import_v, export_v, charge, discharge}, {1.0, -1.0, -1.0, 1.0},
                 RowSense::Equal, net);
      stage.basis_hint.push_back(net >= 0.0 ? import_v : export_v);
    }
  }

  // objective: expected tariff flows minus expected DR payments
  std::vector<double>& obj = lp.objective;
  for (int node = 0; node < tree.node_count(); ++node) {
    const double weight = tree.node_weights[node];
    const int day = stage.first_day + tree.nodes[node].day_offset;
    for (int h = 0; h < 24; ++h) {
      const int abs_hour = (day - 1) * 24 + h;
      obj[stage.var_index(node, h, VarRole::Import)] += weight * tariff.purchase_rate[abs_hour];
      obj[stage.var_index(node, h, VarRole::Export)] -= weight * tariff.export_rate[abs_hour];
    }
  }

  // DR energy payments accrue per event node (its root path is unique)
  for (int node = 0; node < tree.node_count(); ++node) {
    if (tree.nodes[node].event_flag != 1) continue;
    const int day = stage.first_day + tree.nodes[node].day_offset;
    const double rate = dr_spec.energy_rate[day - 1];
    if (rate == 0.0) continue;
    std::vector<int> path;
    for (int id = node; id >= 0; id = tree.nodes[id].parent) path.push_back(id);
    std::reverse(path.begin(), path.end());
    const int offset = tree.nodes[node].day_offset;
    const double weight = tree.node_weights[node];

    LinExpr delta = baseline_expression(tree, stage, path, offset, carry, dr_spec);
    add_window_terms(tree, stage, node, dr_spec, -1.0, delta);
    for (const auto& [var, coef] : delta.terms) obj[var] -= weight * rate * coef;
    lp.objective_constant -= weight * rate * delta.constant;
  }

  // DR capacity payments accrue per leaf and interval
  for (int leaf_idx = 0; leaf_idx < tree.leaf_count(); ++leaf_idx) {
    const double prob = tree.branch_probabilities[leaf_idx];
    const auto& path = tree.leaf_paths[leaf_idx];
    for (std::size_t i = 0; i < dr_spec.intervals.size(); ++i) {
      const DayRange& interval = dr_spec.intervals[i];
      if (interval.last_day < stage.first_day || interval.first_day > horizon_end_day) continue;
      const LinExpr payment = capacity_expression(tree, stage, path, interval,
                                                  dr_spec.capacity_rate[i], carry, dr_spec,
                                                  horizon_end_day);
      for (const auto& [var, coef] : payment.terms) obj[var] -= prob * coef;
      lp.objective_constant -= prob * payment.constant;
    }
  }

  return stage;
}

DaySchedule extract_day_schedule(const StageLp& stage, const LpSolution& solution) {
  if (solution.status != SolveStatus::Optimal) {
    throw std::runtime_error("cannot extract a schedule from a non-optimal solution");
  }
  DaySchedule schedule;
  for (int h = 0; h < 24; ++h) {
    double c = solution.values[stage.var_index(0, h, VarRole::Charge)];
    double d = solution.values[stage.var_index(0, h, VarRole::Discharge)];
    schedule.charge[h] = std::abs(c) < 1e-9 ? 0.0 : c;
    schedule.discharge[h] = std::abs(d) < 1e-9 ? 0.0 : d;
  }
  return schedule;
}

}  // namespace drmpc
