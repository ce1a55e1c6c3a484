#pragma once

#include <vector>

namespace drmpc {

struct HourRecord {
  int day = 0;          // 1-based
  int hour_of_day = 0;  // 1..24
  int event_flag = 0;
  double demand = 0.0;
  double solar = 0.0;
  double charge = 0.0;
  double discharge = 0.0;
  double soc = 0.0;  // stored energy at end of hour
  double net_load = 0.0;
  double cost = 0.0;
  double export_payment = 0.0;
};

struct DayRecord {
  int day = 0;
  int event_flag = 0;
  double window_consumption = 0.0;
  double baseline_used = 0.0;  // baseline at the start of the day
  double reduction = 0.0;      // 0 on non-event days
  double energy_payment = 0.0;
  // day-solve diagnostics
  double objective = 0.0;
  int tree_nodes = 0;
  long iterations = 0;
  int horizon_used = 0;
  int depth_used = 0;
};

struct IntervalRecord {
  int first_day = 0;
  int last_day = 0;
  int event_days = 0;
  double avg_reduction_kw = 0.0;
  double capacity_payment = 0.0;
};

// Realized hourly schedule, loads, cash flows and per-day DR quantities for
// one event realization.
struct SimulationTrace {
  std::vector<HourRecord> hours;
  std::vector<DayRecord> days;
  std::vector<IntervalRecord> intervals;
  double total_cost = 0.0;
};

}  // namespace drmpc
