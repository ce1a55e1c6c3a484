#include "drmpc/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "drmpc/lp_model.hpp"
#include "drmpc/lp_solver.hpp"
#include "drmpc/rng.hpp"
#include "drmpc/scenario_tree.hpp"

namespace drmpc {

namespace {

constexpr int kExhaustiveGuard = 12;  // 2^(T-1) realizations beyond this is not a desk job
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double ratio_or_zero(double num, double den) { return den > 0.0 ? num / den : 0.0; }

// weighted sums feeding one Metrics/IntervalMetrics row
struct Accumulator {
  double weight = 0.0;
  double customer_cost = 0.0;
  double tariff_cost = 0.0;
  double dr_payment = 0.0;
  double baseline_energy = 0.0;  // over event days
  double event_energy = 0.0;
  double window_hours = 0.0;
  double cf_baseline_energy = 0.0;
  double event_days = 0.0;
};

void accumulate_trace(const MpcInputs& inputs, const SimulationTrace& trace,
                      const SimulationTrace& cf_trace, double weight, Accumulator& total,
                      std::vector<Accumulator>& per_interval) {
  double tariff = 0.0;
  for (const HourRecord& rec : trace.hours) tariff += rec.cost - rec.export_payment;
  double dr_pay = 0.0;
  for (const IntervalRecord& rec : trace.intervals) dr_pay += rec.capacity_payment;
  for (const DayRecord& rec : trace.days) dr_pay += rec.energy_payment;

  total.weight += weight;
  total.tariff_cost += weight * tariff;
  total.dr_payment += weight * dr_pay;
  total.customer_cost += weight * (tariff - dr_pay);

  const DrProgramSpec& dr = inputs.dr_spec;
  for (std::size_t t = 0; t < trace.days.size(); ++t) {
    if (trace.days[t].event_flag != 1) continue;
    const double hours = static_cast<double>(dr.dr_window[t].size());
    Accumulator& slot = per_interval[dr.interval_of_day(static_cast<int>(t) + 1)];
    for (Accumulator* acc : {&total, &slot}) {
      acc->baseline_energy += weight * trace.days[t].baseline_used;
      acc->event_energy += weight * trace.days[t].window_consumption;
      acc->cf_baseline_energy += weight * cf_trace.days[t].baseline_used;
      acc->window_hours += weight * hours;
      acc->event_days += weight;
    }
  }
}

Metrics finalize_metrics(const Accumulator& acc) {
  Metrics m;
  const double w = acc.weight > 0.0 ? acc.weight : 1.0;
  m.expected_customer_cost = acc.customer_cost / w;
  m.expected_tariff_cost = acc.tariff_cost / w;
  m.expected_dr_payment = acc.dr_payment / w;
  m.baseline_load = ratio_or_zero(acc.baseline_energy, acc.window_hours);
  m.event_load = ratio_or_zero(acc.event_energy, acc.window_hours);
  const double cf_baseline = ratio_or_zero(acc.cf_baseline_energy, acc.window_hours);
  const InflationSummary summary = derive_inflation(m.baseline_load, m.event_load, cf_baseline);
  m.dr_quantity = summary.dr_quantity;
  m.baseline_inflation_kw = summary.inflation_kw;
  m.baseline_inflation_pct = summary.inflation_pct;
  return m;
}

}  // namespace

InflationSummary derive_inflation(double baseline_load_kw, double event_load_kw,
                                  double counterfactual_baseline_kw) {
  InflationSummary s;
  s.dr_quantity = baseline_load_kw - event_load_kw;
  s.inflation_kw = baseline_load_kw - counterfactual_baseline_kw;
  s.inflation_pct = s.dr_quantity > 1e-9 ? s.inflation_kw / s.dr_quantity : kNan;
  return s;
}

int known_first_day_event(const EventProcess& events) {
  if (events.realization) return (*events.realization)[0];
  const double p1 = events.probabilities.at(0);
  if (p1 == 0.0) return 0;
  if (p1 == 1.0) return 1;
  throw std::invalid_argument("day-1 event must be known: fix the realization or use a "
                              "degenerate day-1 probability");
}

std::uint64_t monte_carlo_run_seed(std::uint64_t master_seed, int run) {
  return mix_seed(master_seed, 0x100000ULL + run);
}

std::uint64_t monte_carlo_realization_seed(std::uint64_t master_seed, int run) {
  return mix_seed(monte_carlo_run_seed(master_seed, run), 0xE7E7ULL);
}

std::vector<int> sample_realization(const EventProcess& events, std::uint64_t seed) {
  if (events.realization) return *events.realization;
  const int days = static_cast<int>(events.probabilities.size());
  std::vector<int> realization(days);
  realization[0] = known_first_day_event(events);
  SplitMix64 rng(seed);
  for (int t = 1; t < days; ++t) {
    realization[t] = rng.next_bernoulli(events.probabilities[t]) ? 1 : 0;
  }
  return realization;
}

ExactResult solve_exact(const MpcInputs& inputs) {
  inputs.validate();
  const int days = inputs.profile.horizon_days;
  if (days > kExhaustiveGuard) {
    throw std::invalid_argument("exact solve is limited to T <= " +
                                std::to_string(kExhaustiveGuard) + " days");
  }
  const int omega1 = known_first_day_event(inputs.events);
  std::vector<double> lookahead(days - 1);
  for (int k = 1; k < days; ++k) lookahead[k - 1] = inputs.events.probabilities[k];

  const ScenarioTree tree = build_tree(omega1, lookahead, days, days, 0);
  CarryState carry;
  carry.stored_energy = 0.5 * inputs.battery.energy_capacity_kwh;
  carry.current_day = 1;
  const StageLp stage =
      build_stage_lp(tree, inputs.battery, inputs.profile, inputs.tariff, inputs.dr_spec, carry);
  SolverOptions options;
  options.basis_hint = stage.basis_hint;
  const LpSolution solution = solve(stage.problem, options);
  if (solution.status != SolveStatus::Optimal) {
    throw std::runtime_error("exact stochastic program did not solve to optimality");
  }
  return {solution.objective, extract_day_schedule(stage, solution)};
}

EvaluationReport compute_metrics(const MpcInputs& inputs,
                                 const std::vector<SimulationTrace>& traces,
                                 const std::vector<double>& weights,
                                 const CounterfactualSchedule& counterfactual) {
  if (traces.size() != weights.size() || traces.empty()) {
    throw std::invalid_argument("need one weight per trace");
  }
  const int days = inputs.profile.horizon_days;
  const int intervals = static_cast<int>(inputs.dr_spec.intervals.size());
  Accumulator total;
  std::vector<Accumulator> per_interval(intervals);

  for (std::size_t r = 0; r < traces.size(); ++r) {
    if (static_cast<int>(traces[r].days.size()) != days) {
      throw std::invalid_argument("trace " + std::to_string(r) + " has a mismatched horizon");
    }
    std::vector<int> realization(days);
    for (int t = 0; t < days; ++t) realization[t] = traces[r].days[t].event_flag;
    const SimulationTrace cf_trace =
        assemble_trace(inputs, counterfactual.charge, counterfactual.discharge, realization);
    accumulate_trace(inputs, traces[r], cf_trace, weights[r], total, per_interval);
  }

  EvaluationReport report;
  report.metrics = finalize_metrics(total);

  double pct_sum = 0.0;
  int pct_count = 0;
  for (int i = 0; i < intervals; ++i) {
    const Accumulator& acc = per_interval[i];
    IntervalMetrics row;
    row.interval = i + 1;
    row.first_day = inputs.dr_spec.intervals[i].first_day;
    row.last_day = inputs.dr_spec.intervals[i].last_day;
    row.expected_event_days = ratio_or_zero(acc.event_days, total.weight);
    row.baseline_load = ratio_or_zero(acc.baseline_energy, acc.window_hours);
    row.event_load = ratio_or_zero(acc.event_energy, acc.window_hours);
    row.counterfactual_baseline = ratio_or_zero(acc.cf_baseline_energy, acc.window_hours);
    const InflationSummary summary =
        derive_inflation(row.baseline_load, row.event_load, row.counterfactual_baseline);
    row.dr_quantity = summary.dr_quantity;
    row.inflation_kw = summary.inflation_kw;
    row.inflation_pct = summary.inflation_pct;
    if (!std::isnan(row.inflation_pct)) {
      pct_sum += row.inflation_pct;
      pct_count++;
    }
    report.intervals.push_back(row);
  }
  report.inflation_pct_interval_mean = pct_count > 0 ? pct_sum / pct_count : kNan;
  return report;
}

namespace {

struct ExhaustiveState {
  const MpcInputs& inputs;
  const MpcConfig& config;
  std::vector<double> charge;
  std::vector<double> discharge;
  std::vector<int> realization;
  std::vector<SimulationTrace> traces;
  std::vector<double> weights;
};

void exhaustive_recurse(ExhaustiveState& state, const CarryState& carry, double weight) {
  const int t = carry.current_day;
  const int days = state.inputs.profile.horizon_days;
  const int omega = state.realization[t - 1];

  const DayResult result = run_day(carry, omega, state.config, state.inputs);
  for (int h = 0; h < 24; ++h) {
    state.charge[(t - 1) * 24 + h] = result.schedule.charge[h];
    state.discharge[(t - 1) * 24 + h] = result.schedule.discharge[h];
  }
  const CarryState next = advance_state(carry, result.schedule, omega, state.inputs);

  if (t == days) {
    state.traces.push_back(
        assemble_trace(state.inputs, state.charge, state.discharge, state.realization));
    state.weights.push_back(weight);
    return;
  }
  const double p_event = state.inputs.events.probabilities[t];
  for (int omega_next = 0; omega_next <= 1; ++omega_next) {
    const double p = omega_next == 1 ? p_event : 1.0 - p_event;
    if (p <= 0.0) continue;
    state.realization[t] = omega_next;
    exhaustive_recurse(state, next, weight * p);
  }
}

}  // namespace

EvaluationReport evaluate_exhaustive(const MpcInputs& inputs, const MpcConfig& config) {
  inputs.validate();
  config.validate();
  const int days = inputs.profile.horizon_days;
  if (days > kExhaustiveGuard) {
    throw std::invalid_argument("exhaustive evaluation is limited to T <= " +
                                std::to_string(kExhaustiveGuard) + " days");
  }
  ExhaustiveState state{inputs, config,
                        std::vector<double>(inputs.profile.hours(), 0.0),
                        std::vector<double>(inputs.profile.hours(), 0.0),
                        std::vector<int>(days, 0),
                        {},
                        {}};
  state.realization[0] = known_first_day_event(inputs.events);

  CarryState carry;
  carry.stored_energy = 0.5 * inputs.battery.energy_capacity_kwh;
  carry.current_day = 1;
  exhaustive_recurse(state, carry, 1.0);

  const CounterfactualSchedule cf = counterfactual_dispatch(inputs.profile, inputs.battery);
  return compute_metrics(inputs, state.traces, state.weights, cf);
}

MonteCarloResult evaluate_monte_carlo(const MpcInputs& inputs, const MpcConfig& config,
                                      int runs) {
  inputs.validate();
  config.validate();
  if (runs < 2) throw std::invalid_argument("Monte-Carlo evaluation needs runs >= 2");

  const CounterfactualSchedule cf = counterfactual_dispatch(inputs.profile, inputs.battery);

  std::vector<SimulationTrace> traces;
  std::vector<Metrics> per_run;
  traces.reserve(runs);
  for (int r = 0; r < runs; ++r) {
    MpcInputs run_inputs = inputs;
    run_inputs.events.realization =
        sample_realization(inputs.events, monte_carlo_realization_seed(config.master_seed, r));
    MpcConfig run_config = config;
    run_config.master_seed = monte_carlo_run_seed(config.master_seed, r);
    SimulationTrace trace = simulate(run_inputs, run_config);
    per_run.push_back(
        compute_metrics(run_inputs, {trace}, {1.0}, cf).metrics);
    traces.push_back(std::move(trace));
  }

  MonteCarloResult result;
  result.pooled = compute_metrics(inputs, traces, std::vector<double>(runs, 1.0), cf);

  const auto fields = {&Metrics::expected_customer_cost, &Metrics::expected_tariff_cost,
                       &Metrics::expected_dr_payment,    &Metrics::dr_quantity,
                       &Metrics::baseline_load,          &Metrics::event_load,
                       &Metrics::baseline_inflation_kw,  &Metrics::baseline_inflation_pct};
  for (auto field : fields) {
    double mean = 0.0;
    for (const Metrics& m : per_run) mean += m.*field;
    mean /= runs;
    double var = 0.0;
    for (const Metrics& m : per_run) var += (m.*field - mean) * (m.*field - mean);
    result.mean.*field = mean;
    result.stddev.*field = std::sqrt(var / (runs - 1));
  }
  return result;
}

CounterfactualSchedule counterfactual_dispatch(const CustomerProfile& profile,
                                               const BatterySpec& battery) {
  profile.validate();
  battery.validate();
  CounterfactualSchedule schedule;
  schedule.charge.assign(profile.hours(), 0.0);
  schedule.discharge.assign(profile.hours(), 0.0);
  double soc = 0.5 * battery.energy_capacity_kwh;
  for (int h = 0; h < profile.hours(); ++h) {
    const double surplus = profile.solar[h] - profile.demand[h];
    if (surplus > 0.0) {
      const double headroom = (battery.energy_capacity_kwh - soc) / battery.charge_efficiency;
      const double amount = std::min({surplus, battery.power_capacity_kw, headroom});
      schedule.charge[h] = amount;
      soc += battery.charge_efficiency * amount;
    } else if (surplus < 0.0) {
      const double available = soc * battery.discharge_efficiency;
      const double amount = std::min({-surplus, battery.power_capacity_kw, available});
      schedule.discharge[h] = amount;
      soc -= amount / battery.discharge_efficiency;
    }
  }
  return schedule;
}

SimulationTrace reprice_trace(const MpcInputs& inputs, const SimulationTrace& trace,
                              ReductionMode mode) {
  MpcInputs adjusted = inputs;
  adjusted.dr_spec.reduction_mode = mode;
  const int hours = inputs.profile.hours();
  std::vector<double> charge(hours), discharge(hours);
  std::vector<int> realization(trace.days.size());
  for (int h = 0; h < hours; ++h) {
    charge[h] = trace.hours[h].charge;
    discharge[h] = trace.hours[h].discharge;
  }
  for (std::size_t t = 0; t < trace.days.size(); ++t) realization[t] = trace.days[t].event_flag;
  return assemble_trace(adjusted, charge, discharge, realization);
}

}  // namespace drmpc
