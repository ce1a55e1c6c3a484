#include "drmpc/mpc.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "drmpc/lp_model.hpp"
#include "drmpc/lp_solver.hpp"
#include "drmpc/rng.hpp"
#include "drmpc/scenario_tree.hpp"

namespace drmpc {

void MpcConfig::validate() const {
  if (final_day < 1) throw std::invalid_argument("final day must be >= 1");
  if (branching_depth < 1 || branching_depth > receding_horizon ||
      receding_horizon > final_day) {
    throw std::invalid_argument("need 1 <= n <= N <= T");
  }
}

void MpcInputs::validate() const {
  battery.validate();
  profile.validate();
  tariff.validate();
  dr_spec.validate();
  events.validate();
  const int days = profile.horizon_days;
  if (dr_spec.horizon_days() != days) {
    throw std::invalid_argument("DR program horizon differs from the profile horizon");
  }
  if (static_cast<int>(events.probabilities.size()) != days) {
    throw std::invalid_argument("event probabilities must cover every day");
  }
  if (static_cast<int>(tariff.purchase_rate.size()) != profile.hours()) {
    throw std::invalid_argument("tariff must cover every hour");
  }
}

DayResult run_day(const CarryState& carry, int omega_today, const MpcConfig& config,
                  const MpcInputs& inputs) {
  const int day = carry.current_day;
  if (day < 1 || day > config.final_day) {
    throw std::invalid_argument("current day outside the simulation horizon");
  }
  const auto [depth, horizon] = clamp_to_final_day(config.branching_depth,
                                                   config.receding_horizon, day,
                                                   config.final_day);
  std::vector<double> lookahead(horizon - 1);
  for (int k = 1; k < horizon; ++k) lookahead[k - 1] = inputs.events.probabilities[day - 1 + k];

  const ScenarioTree tree = build_tree(omega_today, lookahead, depth, horizon,
                                       mix_seed(config.master_seed, day));
  const StageLp stage =
      build_stage_lp(tree, inputs.battery, inputs.profile, inputs.tariff, inputs.dr_spec, carry);

  SolverOptions options;
  options.basis_hint = stage.basis_hint;
  const LpSolution solution = solve(stage.problem, options);
  if (solution.status != SolveStatus::Optimal) {
    // an idle battery is always feasible, so this cannot be a model state
    throw std::runtime_error("day " + std::to_string(day) +
                             ": stage LP not optimal (internal error)");
  }

  DayResult result;
  result.schedule = extract_day_schedule(stage, solution);
  result.objective = solution.objective;
  result.tree_nodes = tree.node_count();
  result.iterations = solution.iterations;
  result.horizon_used = horizon;
  result.depth_used = depth;
  return result;
}

CarryState advance_state(const CarryState& carry, const DaySchedule& committed, int omega_today,
                         const MpcInputs& inputs) {
  const int day = carry.current_day;
  const int base_hour = (day - 1) * 24;
  const BatterySpec& battery = inputs.battery;

  CarryState next = carry;
  double soc = carry.stored_energy;
  std::vector<double> day_loads(24);
  for (int h = 0; h < 24; ++h) {
    soc += battery.charge_efficiency * committed.charge[h] -
           committed.discharge[h] / battery.discharge_efficiency;
    if (soc < -1e-6 || soc > battery.energy_capacity_kwh + 1e-6) {
      throw std::logic_error("committed schedule violates SOC bounds on day " +
                             std::to_string(day));
    }
    day_loads[h] = net_load(inputs.profile.demand[base_hour + h],
                            inputs.profile.solar[base_hour + h], committed.charge[h],
                            committed.discharge[h]);
  }
  next.stored_energy = std::min(std::max(soc, 0.0), battery.energy_capacity_kwh);

  const DrProgramSpec& dr = inputs.dr_spec;
  const double consumption = dr_window_consumption(day_loads, dr.dr_window[day - 1]);
  if (omega_today == 1) {
    const double base = baseline(carry.baseline_history, dr.baseline_days);
    next.prior_event_hours += static_cast<int>(dr.dr_window[day - 1].size());
    next.prior_reduction += reduction(base, consumption, dr.reduction_mode);
  } else {
    next.baseline_history.push_back(consumption);
    while (static_cast<int>(next.baseline_history.size()) > dr.baseline_days) {
      next.baseline_history.erase(next.baseline_history.begin());
    }
  }

  next.current_day = day + 1;
  if (next.current_day <= dr.horizon_days() &&
      dr.interval_of_day(next.current_day) != dr.interval_of_day(day)) {
    next.prior_event_hours = 0;
    next.prior_reduction = 0.0;
  }
  return next;
}

SimulationTrace assemble_trace(const MpcInputs& inputs, const std::vector<double>& charge,
                               const std::vector<double>& discharge,
                               const std::vector<int>& realization) {
  const int days = inputs.profile.horizon_days;
  const int hours = inputs.profile.hours();
  if (static_cast<int>(charge.size()) != hours ||
      static_cast<int>(discharge.size()) != hours ||
      static_cast<int>(realization.size()) != days) {
    throw std::invalid_argument("schedule or realization length mismatch");
  }
  const DrProgramSpec& dr = inputs.dr_spec;

  SimulationTrace trace;
  trace.hours.reserve(hours);
  double soc = 0.5 * inputs.battery.energy_capacity_kwh;
  double tariff_total = 0.0;

  std::vector<double> history;
  double energy_payment_total = 0.0;
  std::vector<double> interval_reductions;
  std::vector<int> interval_hours;
  int interval_index = 0;
  double capacity_total = 0.0;

  auto close_interval = [&]() {
    IntervalRecord rec;
    rec.first_day = dr.intervals[interval_index].first_day;
    rec.last_day = dr.intervals[interval_index].last_day;
    rec.event_days = static_cast<int>(interval_reductions.size());
    rec.avg_reduction_kw = interval_avg_reduction(interval_reductions, interval_hours);
    rec.capacity_payment =
        capacity_payment(rec.avg_reduction_kw, dr.capacity_rate[interval_index]);
    capacity_total += rec.capacity_payment;
    trace.intervals.push_back(rec);
    interval_reductions.clear();
    interval_hours.clear();
  };

  for (int t = 0; t < days; ++t) {
    if (dr.interval_of_day(t + 1) != interval_index) {
      close_interval();
      interval_index = dr.interval_of_day(t + 1);
    }
    DayRecord day;
    day.day = t + 1;
    day.event_flag = realization[t];
    day.baseline_used = baseline(history, dr.baseline_days);

    std::vector<double> day_loads(24);
    for (int h = 0; h < 24; ++h) {
      const int abs_hour = 24 * t + h;
      HourRecord rec;
      rec.day = t + 1;
      rec.hour_of_day = h + 1;
      rec.event_flag = realization[t];
      rec.demand = inputs.profile.demand[abs_hour];
      rec.solar = inputs.profile.solar[abs_hour];
      rec.charge = charge[abs_hour];
      rec.discharge = discharge[abs_hour];
      soc += inputs.battery.charge_efficiency * rec.charge -
             rec.discharge / inputs.battery.discharge_efficiency;
      rec.soc = soc;
      rec.net_load = net_load(rec.demand, rec.solar, rec.charge, rec.discharge);
      const auto flow = hourly_cash_flow(rec.net_load, inputs.tariff.purchase_rate[abs_hour],
                                         inputs.tariff.export_rate[abs_hour]);
      rec.cost = flow.cost;
      rec.export_payment = flow.export_payment;
      tariff_total += flow.cost - flow.export_payment;
      day_loads[h] = rec.net_load;
      trace.hours.push_back(rec);
    }

    day.window_consumption = dr_window_consumption(day_loads, dr.dr_window[t]);
    if (realization[t] == 1) {
      day.reduction = reduction(day.baseline_used, day.window_consumption, dr.reduction_mode);
      day.energy_payment = energy_payment(day.reduction, dr.energy_rate[t], true);
      energy_payment_total += day.energy_payment;
      interval_reductions.push_back(day.reduction);
      interval_hours.push_back(static_cast<int>(dr.dr_window[t].size()));
    } else {
      history.push_back(day.window_consumption);
      while (static_cast<int>(history.size()) > dr.baseline_days) history.erase(history.begin());
    }
    trace.days.push_back(day);
  }
  close_interval();

  trace.total_cost = tariff_total - capacity_total - energy_payment_total;
  return trace;
}

SimulationTrace simulate(const MpcInputs& inputs, const MpcConfig& config) {
  inputs.validate();
  config.validate();
  if (!inputs.events.realization) {
    throw std::invalid_argument("simulate needs a fixed event realization");
  }
  const std::vector<int>& realization = *inputs.events.realization;
  const int days = inputs.profile.horizon_days;
  if (config.final_day != days) {
    throw std::invalid_argument("config final day must equal the profile horizon");
  }

  CarryState carry;
  carry.stored_energy = 0.5 * inputs.battery.energy_capacity_kwh;
  carry.current_day = 1;

  std::vector<double> charge(inputs.profile.hours(), 0.0);
  std::vector<double> discharge(inputs.profile.hours(), 0.0);
  std::vector<DayResult> day_results;
  day_results.reserve(days);

  for (int t = 1; t <= days; ++t) {
    DayResult result;
    try {
      result = run_day(carry, realization[t - 1], config, inputs);
    } catch (const std::exception& e) {
      throw std::runtime_error("simulation failed on day " + std::to_string(t) + ": " +
                               e.what());
    }
    for (int h = 0; h < 24; ++h) {
      charge[(t - 1) * 24 + h] = result.schedule.charge[h];
      discharge[(t - 1) * 24 + h] = result.schedule.discharge[h];
    }
    carry = advance_state(carry, result.schedule, realization[t - 1], inputs);
    day_results.push_back(std::move(result));
  }

  SimulationTrace trace = assemble_trace(inputs, charge, discharge, realization);
  for (int t = 0; t < days; ++t) {
    trace.days[t].objective = day_results[t].objective;
    trace.days[t].tree_nodes = day_results[t].tree_nodes;
    trace.days[t].iterations = day_results[t].iterations;
    trace.days[t].horizon_used = day_results[t].horizon_used;
    trace.days[t].depth_used = day_results[t].depth_used;
  }
  return trace;
}

}  // namespace drmpc
