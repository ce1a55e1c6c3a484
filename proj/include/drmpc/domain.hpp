#pragma once

#include <optional>
#include <string>
#include <vector>

#include "drmpc/trace.hpp"

namespace drmpc {

// Battery ratings. Power limits the hourly charge+discharge sum, energy
// limits the stored level, efficiencies apply on the way in and out.
struct BatterySpec {
  double power_capacity_kw = 0.0;
  double energy_capacity_kwh = 0.0;
  double charge_efficiency = 1.0;
  double discharge_efficiency = 1.0;

  void validate() const;
};

// Hourly purchase/export rates over the whole horizon. Purchase must
// dominate export in every hour; the net-load split in the LP relies on it.
struct TariffSchedule {
  std::vector<double> purchase_rate;
  std::vector<double> export_rate;

  static TariffSchedule flat(double purchase, double export_r, int hours);
  void validate() const;
};

enum class ReductionMode { Signed, Clipped };

// Inclusive 1-based day range.
struct DayRange {
  int first_day = 0;
  int last_day = 0;

  int length() const { return last_day - first_day + 1; }
};

// Demand-response program description: per-day DR windows, baseline depth,
// payment rates, and the interval partition used for capacity payments.
struct DrProgramSpec {
  std::vector<std::vector<int>> dr_window;  // per day; hours 1..24 within the day
  int baseline_days = 10;                   // N_B
  ReductionMode reduction_mode = ReductionMode::Signed;
  std::vector<double> energy_rate;    // per day, $/kWh
  std::vector<double> capacity_rate;  // per interval, $/kW
  std::vector<DayRange> intervals;    // partition of days 1..T

  int horizon_days() const { return static_cast<int>(dr_window.size()); }
  // Index into intervals for a 1-based day.
  int interval_of_day(int day) const;
  void validate() const;
};

// Hourly demand and solar production for the whole horizon.
struct CustomerProfile {
  std::vector<double> demand;  // kWh per hour, length 24*T
  std::vector<double> solar;   // kWh per hour, length 24*T
  int horizon_days = 0;

  int hours() const { return 24 * horizon_days; }
  void validate() const;
};

// Independent per-day Bernoulli event probabilities, optionally with a
// fixed realization for replay.
struct EventProcess {
  std::vector<double> probabilities;
  std::optional<std::vector<int>> realization;  // 0/1 per day when fixed

  void validate() const;
};

// Inter-day state carried between MPC day-solves.
struct CarryState {
  double stored_energy = 0.0;
  std::vector<double> baseline_history;  // oldest first, length <= N_B
  int prior_event_hours = 0;             // event hours elapsed in current interval
  double prior_reduction = 0.0;          // accumulated reduction over those hours
  int current_day = 1;                   // 1-based
};

// Committed charge/discharge quantities for one day.
struct DaySchedule {
  std::vector<double> charge;     // 24 entries, kWh
  std::vector<double> discharge;  // 24 entries, kWh

  DaySchedule() : charge(24, 0.0), discharge(24, 0.0) {}
};

struct HourlyCashFlow {
  double cost = 0.0;
  double export_payment = 0.0;
};

// l = d + b+ - rho - b-
double net_load(double demand, double solar, double b_plus, double b_minus);

// Splits one hour's net load into purchase cost and export payment.
// Requires purchase_rate >= export_rate >= 0.
HourlyCashFlow hourly_cash_flow(double load, double purchase_rate, double export_rate);

// Sum of hourly loads over the DR window of a day. `day_loads` holds the
// 24 hourly net loads of the day; `window` holds day-local hours 1..24.
double dr_window_consumption(const std::vector<double>& day_loads,
                             const std::vector<int>& window);

// Mean of the available history entries, zero when the history is empty.
double baseline(const std::vector<double>& history, int n_b);

// Reduction credited on an event day relative to the baseline.
double reduction(double baseline_kwh, double event_consumption, ReductionMode mode);

// Per-event-day energy payment; zero on non-event days.
double energy_payment(double delta, double rate, bool is_event);

// Average kW reduction over an interval's event days; zero with no events.
double interval_avg_reduction(const std::vector<double>& reductions,
                              const std::vector<int>& window_hours);

double capacity_payment(double avg_reduction, double rate);

// Fraction of the interval covered by the horizon, applied to a full
// interval payment. The factor is clamped to 1 when the horizon covers
// the interval entirely.
double prorate_capacity_payment(double full_payment, int interval_start,
                                int interval_end, int horizon_end);

// Recomputes the realized total net cost of a trace from its hourly
// records, with exact (non-prorated) interval payments. Independent of the
// running totals accumulated during simulation.
double realized_total_cost(const SimulationTrace& trace, const TariffSchedule& tariff,
                           const DrProgramSpec& dr_spec,
                           const std::vector<int>& realization);

}  // namespace drmpc
