#include "drmpc/io_config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace drmpc {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

[[noreturn]] void fail(const std::string& file, int row, const std::string& reason) {
  throw std::runtime_error(file + ":" + std::to_string(row) + ": " + reason);
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_number(const std::string& file, int row, const std::string& text) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    fail(file, row, "not a number: '" + text + "'");
  }
  if (used != text.size()) fail(file, row, "trailing characters in number: '" + text + "'");
  return value;
}

// two-column CSV with a fixed header; returns (index, value) rows
std::vector<std::pair<long, double>> load_two_column_csv(const std::string& path,
                                                         const std::string& header) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open file");
  std::string line;
  int row = 0;
  std::vector<std::pair<long, double>> rows;
  while (std::getline(in, line)) {
    row++;
    const std::string text = trim(line);
    if (text.empty()) {
      if (in.eof()) break;
      fail(path, row, "blank line");
    }
    if (row == 1) {
      if (text != header) fail(path, row, "expected header '" + header + "', got '" + text + "'");
      continue;
    }
    const auto comma = text.find(',');
    if (comma == std::string::npos || text.find(',', comma + 1) != std::string::npos) {
      fail(path, row, "expected exactly two comma-separated fields");
    }
    const std::string first = trim(text.substr(0, comma));
    const std::string second = trim(text.substr(comma + 1));
    const double index = parse_number(path, row, first);
    if (index != std::floor(index)) fail(path, row, "index column must be an integer");
    rows.emplace_back(static_cast<long>(index), parse_number(path, row, second));
  }
  if (rows.empty()) throw std::runtime_error(path + ": no data rows");
  return rows;
}

}  // namespace

std::vector<double> load_hourly_csv(const std::string& path) {
  const auto rows = load_two_column_csv(path, "hour,value");
  std::vector<double> series;
  series.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const int file_row = static_cast<int>(i) + 2;
    if (rows[i].first != static_cast<long>(i) + 1) {
      fail(path, file_row,
           "hours must increase from 1 without gaps; expected hour " + std::to_string(i + 1) +
               ", got " + std::to_string(rows[i].first));
    }
    if (rows[i].second < 0.0) fail(path, file_row, "negative value");
    if (!std::isfinite(rows[i].second)) fail(path, file_row, "non-finite value");
    series.push_back(rows[i].second);
  }
  return series;
}

std::vector<double> load_daily_probabilities_csv(const std::string& path) {
  const auto rows = load_two_column_csv(path, "day,probability");
  std::vector<double> series;
  series.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const int file_row = static_cast<int>(i) + 2;
    if (rows[i].first != static_cast<long>(i) + 1) {
      fail(path, file_row, "days must increase from 1 without gaps");
    }
    if (rows[i].second < 0.0 || rows[i].second > 1.0) {
      fail(path, file_row, "probability out of [0, 1]");
    }
    series.push_back(rows[i].second);
  }
  return series;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open config");
  RunConfig config;
  const fs::path base = fs::path(path).parent_path();

  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    row++;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string text = trim(line);
    if (text.empty()) continue;
    const auto equals = text.find('=');
    if (equals == std::string::npos) fail(path, row, "expected 'key = value'");
    const std::string key = trim(text.substr(0, equals));
    const std::string value = trim(text.substr(equals + 1));
    if (value.empty()) fail(path, row, "empty value for key '" + key + "'");

    const auto num = [&] { return parse_number(path, row, value); };
    const auto integer = [&] {
      const double v = num();
      if (v != std::floor(v)) fail(path, row, "key '" + key + "' needs an integer");
      return static_cast<int>(v);
    };
    const auto resolved = [&] { return (base / value).lexically_normal().string(); };

    if (key == "demand_csv") config.demand_csv = resolved();
    else if (key == "solar_csv") config.solar_csv = resolved();
    else if (key == "probability_csv") config.probability_csv = resolved();
    else if (key == "horizon_days") config.horizon_days = integer();
    else if (key == "battery_power_kw") config.battery_power_kw = num();
    else if (key == "battery_energy_kwh") config.battery_energy_kwh = num();
    else if (key == "round_trip_efficiency") config.round_trip_efficiency = num();
    else if (key == "charge_efficiency") config.charge_efficiency = num();
    else if (key == "discharge_efficiency") config.discharge_efficiency = num();
    else if (key == "purchase_rate") config.purchase_rate = num();
    else if (key == "export_rate") config.export_rate = num();
    else if (key == "dr_window_start") config.dr_window_start = integer();
    else if (key == "dr_window_end") config.dr_window_end = integer();
    else if (key == "baseline_days") config.baseline_days = integer();
    else if (key == "reduction_mode") config.reduction_mode = value;
    else if (key == "energy_rate") config.energy_rate = num();
    else if (key == "capacity_rate") config.capacity_rate = num();
    else if (key == "interval_length_days") config.interval_length_days = integer();
    else if (key == "receding_horizon") config.receding_horizon = integer();
    else if (key == "branching_depth") config.branching_depth = integer();
    else if (key == "master_seed") config.master_seed = static_cast<std::uint64_t>(num());
    else if (key == "runs") config.runs = integer();
    else if (key == "study") config.study = value;
    else if (key == "output_dir") config.output_dir = value;
    else fail(path, row, "unknown key '" + key + "'");
  }

  if (config.horizon_days < 1) throw std::runtime_error(path + ": horizon_days must be set");
  if (config.study != "simulate" && config.study != "exact" && config.study != "evaluate" &&
      config.study != "counterfactual") {
    throw std::runtime_error(path + ": study must be simulate, exact, evaluate or "
                             "counterfactual");
  }
  if (config.reduction_mode != "signed" && config.reduction_mode != "clipped") {
    throw std::runtime_error(path + ": reduction_mode must be signed or clipped");
  }
  return config;
}

MpcInputs RunConfig::assemble() const {
  for (const std::string* p : {&demand_csv, &solar_csv, &probability_csv}) {
    if (p->empty()) throw std::runtime_error("config is missing a CSV path");
    if (!fs::exists(*p)) throw std::runtime_error(*p + ": file does not exist");
  }

  MpcInputs inputs;
  inputs.profile.horizon_days = horizon_days;
  inputs.profile.demand = load_hourly_csv(demand_csv);
  inputs.profile.solar = load_hourly_csv(solar_csv);
  if (static_cast<int>(inputs.profile.demand.size()) != 24 * horizon_days) {
    throw std::runtime_error(demand_csv + ": expected " + std::to_string(24 * horizon_days) +
                             " hourly rows, got " + std::to_string(inputs.profile.demand.size()));
  }
  if (static_cast<int>(inputs.profile.solar.size()) != 24 * horizon_days) {
    throw std::runtime_error(solar_csv + ": expected " + std::to_string(24 * horizon_days) +
                             " hourly rows, got " + std::to_string(inputs.profile.solar.size()));
  }
  inputs.events.probabilities = load_daily_probabilities_csv(probability_csv);
  if (static_cast<int>(inputs.events.probabilities.size()) != horizon_days) {
    throw std::runtime_error(probability_csv + ": expected " + std::to_string(horizon_days) +
                             " daily rows, got " +
                             std::to_string(inputs.events.probabilities.size()));
  }

  inputs.battery.power_capacity_kw = battery_power_kw;
  inputs.battery.energy_capacity_kwh = battery_energy_kwh;
  const double split = std::sqrt(round_trip_efficiency);
  inputs.battery.charge_efficiency = charge_efficiency.value_or(split);
  inputs.battery.discharge_efficiency = discharge_efficiency.value_or(split);

  inputs.tariff = TariffSchedule::flat(purchase_rate, export_rate, 24 * horizon_days);

  if (dr_window_start < 1 || dr_window_end > 24 || dr_window_start > dr_window_end) {
    throw std::runtime_error("DR window must satisfy 1 <= start <= end <= 24");
  }
  std::vector<int> window;
  for (int h = dr_window_start; h <= dr_window_end; ++h) window.push_back(h);
  inputs.dr_spec.dr_window.assign(horizon_days, window);
  inputs.dr_spec.baseline_days = baseline_days;
  inputs.dr_spec.reduction_mode =
      reduction_mode == "clipped" ? ReductionMode::Clipped : ReductionMode::Signed;
  inputs.dr_spec.energy_rate.assign(horizon_days, energy_rate);

  const int length = interval_length_days > 0 ? interval_length_days : horizon_days;
  for (int start = 1; start <= horizon_days; start += length) {
    inputs.dr_spec.intervals.push_back({start, std::min(start + length - 1, horizon_days)});
    inputs.dr_spec.capacity_rate.push_back(capacity_rate);
  }

  inputs.validate();
  return inputs;
}

MpcConfig RunConfig::mpc_config() const {
  MpcConfig config;
  config.receding_horizon = std::min(receding_horizon, horizon_days);
  config.branching_depth = std::min(branching_depth, config.receding_horizon);
  config.master_seed = master_seed;
  config.final_day = horizon_days;
  config.validate();
  return config;
}

namespace {

void open_or_throw(std::ofstream& out, const std::string& path) {
  out.open(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
}

std::string format_double(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.10g", v);
  return buffer;
}

}  // namespace

void write_hourly_trace_csv(const SimulationTrace& trace, const std::string& path) {
  std::ofstream out;
  open_or_throw(out, path);
  out << "hour,day,event_flag,demand,solar,charge,discharge,soc,net_load,cost,"
         "export_payment\n";
  int hour = 0;
  for (const HourRecord& rec : trace.hours) {
    hour++;
    out << hour << ',' << rec.day << ',' << rec.event_flag << ',' << format_double(rec.demand)
        << ',' << format_double(rec.solar) << ',' << format_double(rec.charge) << ','
        << format_double(rec.discharge) << ',' << format_double(rec.soc) << ','
        << format_double(rec.net_load) << ',' << format_double(rec.cost) << ','
        << format_double(rec.export_payment) << '\n';
  }
}

void write_daily_json(const SimulationTrace& trace, const std::string& path) {
  json days = json::array();
  for (const DayRecord& rec : trace.days) {
    json d;
    d["day"] = rec.day;
    d["event_flag"] = rec.event_flag;
    d["window_consumption_kwh"] = rec.window_consumption;
    d["baseline_kwh"] = rec.baseline_used;
    d["reduction_kwh"] = rec.reduction;
    d["energy_payment"] = rec.energy_payment;
    d["objective"] = rec.objective;
    d["tree_nodes"] = rec.tree_nodes;
    d["iterations"] = rec.iterations;
    d["horizon_used"] = rec.horizon_used;
    d["depth_used"] = rec.depth_used;
    days.push_back(d);
  }
  json intervals = json::array();
  for (const IntervalRecord& rec : trace.intervals) {
    json i;
    i["first_day"] = rec.first_day;
    i["last_day"] = rec.last_day;
    i["event_days"] = rec.event_days;
    i["avg_reduction_kw"] = rec.avg_reduction_kw;
    i["capacity_payment"] = rec.capacity_payment;
    intervals.push_back(i);
  }
  json j;
  j["days"] = days;
  j["intervals"] = intervals;
  j["total_cost"] = trace.total_cost;
  std::ofstream out;
  open_or_throw(out, path);
  out << j.dump(2) << '\n';
}

void write_monthly_csv(const EvaluationReport& report, const std::string& path) {
  std::ofstream out;
  open_or_throw(out, path);
  out << "interval,first_day,last_day,expected_event_days,baseline_kw,event_kw,dr_kw,"
         "counterfactual_baseline_kw,inflation_kw,inflation_pct\n";
  for (const IntervalMetrics& row : report.intervals) {
    out << row.interval << ',' << row.first_day << ',' << row.last_day << ','
        << format_double(row.expected_event_days) << ',' << format_double(row.baseline_load)
        << ',' << format_double(row.event_load) << ',' << format_double(row.dr_quantity) << ','
        << format_double(row.counterfactual_baseline) << ',' << format_double(row.inflation_kw)
        << ',';
    if (std::isnan(row.inflation_pct)) {
      out << "n/a";
    } else {
      out << format_double(row.inflation_pct);
    }
    out << '\n';
  }
}

namespace {

json metrics_to_json(const Metrics& m) {
  json j;
  j["expected_customer_cost"] = m.expected_customer_cost;
  j["expected_tariff_cost"] = m.expected_tariff_cost;
  j["expected_dr_payment"] = m.expected_dr_payment;
  j["dr_quantity_kw"] = m.dr_quantity;
  j["baseline_load_kw"] = m.baseline_load;
  j["event_load_kw"] = m.event_load;
  j["baseline_inflation_kw"] = m.baseline_inflation_kw;
  if (std::isnan(m.baseline_inflation_pct)) {
    j["baseline_inflation_pct"] = nullptr;
  } else {
    j["baseline_inflation_pct"] = m.baseline_inflation_pct;
  }
  return j;
}

}  // namespace

void write_summary_json(const Metrics& metrics, const std::string& path) {
  std::ofstream out;
  open_or_throw(out, path);
  out << metrics_to_json(metrics).dump(2) << '\n';
}

Metrics read_summary_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");
  json j;
  in >> j;
  Metrics m;
  m.expected_customer_cost = j.at("expected_customer_cost").get<double>();
  m.expected_tariff_cost = j.at("expected_tariff_cost").get<double>();
  m.expected_dr_payment = j.at("expected_dr_payment").get<double>();
  m.dr_quantity = j.at("dr_quantity_kw").get<double>();
  m.baseline_load = j.at("baseline_load_kw").get<double>();
  m.event_load = j.at("event_load_kw").get<double>();
  m.baseline_inflation_kw = j.at("baseline_inflation_kw").get<double>();
  const auto& pct = j.at("baseline_inflation_pct");
  m.baseline_inflation_pct =
      pct.is_null() ? std::numeric_limits<double>::quiet_NaN() : pct.get<double>();
  return m;
}

void write_report(const EvaluationReport& report, const std::vector<SimulationTrace>& traces,
                  const std::string& dir) {
  fs::create_directories(dir);
  const fs::path base(dir);
  write_summary_json(report.metrics, (base / "summary.json").string());
  write_monthly_csv(report, (base / "monthly.csv").string());
  if (!traces.empty()) {
    write_hourly_trace_csv(traces.front(), (base / "hourly_trace.csv").string());
    write_daily_json(traces.front(), (base / "daily.json").string());
  }
}

}  // namespace drmpc
