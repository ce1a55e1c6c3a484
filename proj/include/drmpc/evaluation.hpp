#pragma once

#include <utility>
#include <vector>

#include "drmpc/domain.hpp"
#include "drmpc/mpc.hpp"
#include "drmpc/trace.hpp"

namespace drmpc {

// Expectation-weighted outcome metrics. Loads are in kW (window energy over
// window hours, event days only). baseline_inflation_pct is NaN when the DR
// quantity is too small to divide by.
struct Metrics {
  double expected_customer_cost = 0.0;
  double expected_tariff_cost = 0.0;
  double expected_dr_payment = 0.0;
  double dr_quantity = 0.0;
  double baseline_load = 0.0;
  double event_load = 0.0;
  double baseline_inflation_kw = 0.0;
  double baseline_inflation_pct = 0.0;
};

struct IntervalMetrics {
  int interval = 0;  // 1-based
  int first_day = 0;
  int last_day = 0;
  double expected_event_days = 0.0;
  double baseline_load = 0.0;
  double event_load = 0.0;
  double dr_quantity = 0.0;
  double counterfactual_baseline = 0.0;
  double inflation_kw = 0.0;
  double inflation_pct = 0.0;  // NaN when undefined
};

struct EvaluationReport {
  Metrics metrics;
  std::vector<IntervalMetrics> intervals;
  // Same yearly number under the two interval-weighting conventions:
  // event-weighted (ratio of sums) and uniform mean over defined intervals.
  double inflation_pct_interval_mean = 0.0;
};

struct ExactResult {
  double expected_cost = 0.0;
  DaySchedule day_one;
};

// Fixed hourly dispatch for the whole horizon.
struct CounterfactualSchedule {
  std::vector<double> charge;
  std::vector<double> discharge;
};

// Headline arithmetic shared by every report row; callable directly on
// aggregate values.
struct InflationSummary {
  double dr_quantity = 0.0;
  double inflation_kw = 0.0;
  double inflation_pct = 0.0;  // NaN when dr_quantity <= 1e-9
};
InflationSummary derive_inflation(double baseline_load_kw, double event_load_kw,
                                  double counterfactual_baseline_kw);

// Event flag of day 1, which is known when the first problem is solved:
// taken from the fixed realization, or from a degenerate day-1 probability.
int known_first_day_event(const EventProcess& events);

// Draws one full realization: day 1 from known_first_day_event, later days
// Bernoulli(P_t) from the seed. Returns the fixed realization when one is
// set.
std::vector<int> sample_realization(const EventProcess& events, std::uint64_t seed);

// Per-run seed derivations used by evaluate_monte_carlo, exposed so other
// policies (the counterfactual row of the incentives study) can be scored
// against the same realization draws.
std::uint64_t monte_carlo_run_seed(std::uint64_t master_seed, int run);
std::uint64_t monte_carlo_realization_seed(std::uint64_t master_seed, int run);

// Full-horizon stochastic optimum via one tree with n = N = T (2^(T-1)
// scenarios; guarded to T <= 12).
ExactResult solve_exact(const MpcInputs& inputs);

// Runs one full MPC simulation per event realization and weights the
// outcomes by realization probability (ω_1 fixed, T <= 12).
EvaluationReport evaluate_exhaustive(const MpcInputs& inputs, const MpcConfig& config);

struct MonteCarloResult {
  Metrics mean;
  Metrics stddev;           // sample standard deviation across runs
  EvaluationReport pooled;  // all runs weighted equally
};

// Samples `runs` realizations (or replays the fixed one) with per-run
// derived seeds and reports per-metric mean and standard deviation.
MonteCarloResult evaluate_monte_carlo(const MpcInputs& inputs, const MpcConfig& config,
                                      int runs);

// Tariff-only greedy dispatch: absorb surplus solar, discharge against
// deficit, never both; the control-group policy for inflation metrics.
CounterfactualSchedule counterfactual_dispatch(const CustomerProfile& profile,
                                               const BatterySpec& battery);

// Aggregates expectation-weighted metrics over traces, replaying the
// counterfactual schedule under each trace's realization for the
// inflation reference.
EvaluationReport compute_metrics(const MpcInputs& inputs,
                                 const std::vector<SimulationTrace>& traces,
                                 const std::vector<double>& weights,
                                 const CounterfactualSchedule& counterfactual);

// Re-derives a trace's DR payments under a different reduction mode
// (sensitivity reporting; the optimizer itself is signed-only).
SimulationTrace reprice_trace(const MpcInputs& inputs, const SimulationTrace& trace,
                              ReductionMode mode);

}  // namespace drmpc
