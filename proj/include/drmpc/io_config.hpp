#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "drmpc/evaluation.hpp"
#include "drmpc/mpc.hpp"
#include "drmpc/trace.hpp"

namespace drmpc {

// Run description parsed from a `key = value` config file. Numeric defaults
// follow the reference customer: 10 kW / 27 kWh battery at 90% round-trip
// efficiency, $0.29/kWh purchase, $0.108/kWh export, 5-9 p.m. DR window.
struct RunConfig {
  std::string demand_csv;
  std::string solar_csv;
  std::string probability_csv;
  int horizon_days = 0;

  double battery_power_kw = 10.0;
  double battery_energy_kwh = 27.0;
  double round_trip_efficiency = 0.9;
  std::optional<double> charge_efficiency;     // override the square-root split
  std::optional<double> discharge_efficiency;

  double purchase_rate = 0.29;
  double export_rate = 0.108;

  int dr_window_start = 18;  // hour of day, 1..24
  int dr_window_end = 21;
  int baseline_days = 10;
  std::string reduction_mode = "signed";
  double energy_rate = 0.0;    // $/kWh per event day
  double capacity_rate = 2.0;  // $/kW per interval
  int interval_length_days = 0;  // 0 = one interval spanning the horizon

  int receding_horizon = 35;
  int branching_depth = 4;
  std::uint64_t master_seed = 1;
  int runs = 10;
  std::string study = "simulate";
  std::string output_dir = "out";

  // Loads the referenced CSVs and assembles validated domain inputs.
  MpcInputs assemble() const;
  MpcConfig mpc_config() const;
};

// Parses the config file; unknown keys and malformed values are errors
// naming the key. Relative CSV paths resolve against the config directory.
RunConfig load_config(const std::string& path);

// `hour,value` rows with hours strictly increasing from 1; negative or
// non-numeric values are rejected with their row number.
std::vector<double> load_hourly_csv(const std::string& path);

// `day,probability` rows with days 1..T and probabilities in [0, 1].
std::vector<double> load_daily_probabilities_csv(const std::string& path);

// hour, day, event_flag, demand, solar, charge, discharge, soc, net_load,
// cost, export_payment
void write_hourly_trace_csv(const SimulationTrace& trace, const std::string& path);

// Per-day records (event flag, window consumption, baseline, reduction,
// payment, day-solve diagnostics) plus per-interval payments.
void write_daily_json(const SimulationTrace& trace, const std::string& path);

void write_monthly_csv(const EvaluationReport& report, const std::string& path);

void write_summary_json(const Metrics& metrics, const std::string& path);
Metrics read_summary_json(const std::string& path);

// summary.json + monthly.csv + hourly_trace.csv + daily.json (first
// trace) under `dir`.
void write_report(const EvaluationReport& report, const std::vector<SimulationTrace>& traces,
                  const std::string& dir);

}  // namespace drmpc
