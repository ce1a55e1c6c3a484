#include "drmpc/domain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace drmpc {

namespace {

void require(bool cond, const std::string& message) {
  if (!cond) throw std::invalid_argument(message);
}

}  // namespace

void BatterySpec::validate() const {
  require(power_capacity_kw >= 0.0, "battery power capacity must be >= 0");
  require(energy_capacity_kwh >= 0.0, "battery energy capacity must be >= 0");
  require(charge_efficiency > 0.0 && charge_efficiency <= 1.0,
          "charge efficiency must lie in (0, 1]");
  require(discharge_efficiency > 0.0 && discharge_efficiency <= 1.0,
          "discharge efficiency must lie in (0, 1]");
}

TariffSchedule TariffSchedule::flat(double purchase, double export_r, int hours) {
  TariffSchedule t;
  t.purchase_rate.assign(hours, purchase);
  t.export_rate.assign(hours, export_r);
  return t;
}

void TariffSchedule::validate() const {
  require(purchase_rate.size() == export_rate.size(),
          "tariff rate series must have equal length");
  for (std::size_t h = 0; h < purchase_rate.size(); ++h) {
    if (!(purchase_rate[h] >= export_rate[h] && export_rate[h] >= 0.0)) {
      throw std::invalid_argument("tariff requires purchase >= export >= 0 at hour " +
                                  std::to_string(h + 1));
    }
  }
}

int DrProgramSpec::interval_of_day(int day) const {
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    if (day >= intervals[i].first_day && day <= intervals[i].last_day) {
      return static_cast<int>(i);
    }
  }
  throw std::invalid_argument("day " + std::to_string(day) + " not covered by any interval");
}

void DrProgramSpec::validate() const {
  const int days = horizon_days();
  require(baseline_days >= 1, "baseline_days must be >= 1");
  require(static_cast<int>(energy_rate.size()) == days,
          "energy_rate needs one entry per day");
  require(capacity_rate.size() == intervals.size(),
          "capacity_rate needs one entry per interval");
  for (double r : energy_rate) require(r >= 0.0, "energy rate must be >= 0");
  for (double r : capacity_rate) require(r >= 0.0, "capacity rate must be >= 0");
  for (int t = 0; t < days; ++t) {
    for (int h : dr_window[t]) {
      require(h >= 1 && h <= 24, "DR window hour out of 1..24 on day " + std::to_string(t + 1));
    }
  }
  // intervals must partition 1..T
  int expected_start = 1;
  for (const DayRange& r : intervals) {
    require(r.first_day == expected_start && r.last_day >= r.first_day,
            "intervals must partition days 1..T without gaps");
    expected_start = r.last_day + 1;
  }
  require(expected_start == days + 1, "intervals must cover exactly days 1..T");
}

void CustomerProfile::validate() const {
  require(horizon_days >= 1, "horizon must be at least one day");
  require(static_cast<int>(demand.size()) == hours(), "demand series length must be 24*T");
  require(static_cast<int>(solar.size()) == hours(), "solar series length must be 24*T");
  for (double d : demand) require(d >= 0.0 && std::isfinite(d), "demand must be finite and >= 0");
  for (double s : solar) require(s >= 0.0 && std::isfinite(s), "solar must be finite and >= 0");
}

void EventProcess::validate() const {
  for (double p : probabilities) {
    require(p >= 0.0 && p <= 1.0, "event probability out of [0, 1]");
  }
  if (realization) {
    require(realization->size() == probabilities.size(),
            "realization length must match probability length");
    for (int w : *realization) require(w == 0 || w == 1, "realization entries must be 0/1");
  }
}

double net_load(double demand, double solar, double b_plus, double b_minus) {
  return demand + b_plus - solar - b_minus;
}

HourlyCashFlow hourly_cash_flow(double load, double purchase_rate, double export_rate) {
  if (!(purchase_rate >= export_rate && export_rate >= 0.0)) {
    throw std::invalid_argument("hourly_cash_flow requires purchase >= export >= 0");
  }
  if (load >= 0.0) return {purchase_rate * load, 0.0};
  return {0.0, export_rate * (-load)};
}

double dr_window_consumption(const std::vector<double>& day_loads,
                             const std::vector<int>& window) {
  if (window.empty()) throw std::invalid_argument("DR window is empty");
  double sum = 0.0;
  for (int h : window) {
    if (h < 1 || h > static_cast<int>(day_loads.size())) {
      throw std::invalid_argument("DR window hour " + std::to_string(h) + " outside day");
    }
    sum += day_loads[h - 1];
  }
  return sum;
}

double baseline(const std::vector<double>& history, int n_b) {
  if (history.empty()) return 0.0;
  const int used = std::min<int>(n_b, static_cast<int>(history.size()));
  // most recent entries are at the back
  double sum = 0.0;
  for (int i = 0; i < used; ++i) sum += history[history.size() - 1 - i];
  return sum / used;
}

double reduction(double baseline_kwh, double event_consumption, ReductionMode mode) {
  const double delta = baseline_kwh - event_consumption;
  return mode == ReductionMode::Clipped ? std::max(0.0, delta) : delta;
}

double energy_payment(double delta, double rate, bool is_event) {
  return is_event ? rate * delta : 0.0;
}

double interval_avg_reduction(const std::vector<double>& reductions,
                              const std::vector<int>& window_hours) {
  if (reductions.size() != window_hours.size()) {
    throw std::invalid_argument("reduction and window-hour lists differ in length");
  }
  if (reductions.empty()) return 0.0;
  const double total = std::accumulate(reductions.begin(), reductions.end(), 0.0);
  long hours = 0;
  for (int h : window_hours) hours += h;
  if (hours == 0) return 0.0;
  return total / static_cast<double>(hours);
}

double capacity_payment(double avg_reduction, double rate) { return rate * avg_reduction; }

double prorate_capacity_payment(double full_payment, int interval_start, int interval_end,
                                int horizon_end) {
  if (interval_start > interval_end) {
    throw std::invalid_argument("interval start after interval end");
  }
  if (horizon_end < interval_start) {
    throw std::invalid_argument("horizon ends before the interval starts");
  }
  const double covered = std::min(interval_end, horizon_end) - interval_start + 1;
  const double total = interval_end - interval_start + 1;
  return full_payment * (covered / total);
}

double realized_total_cost(const SimulationTrace& trace, const TariffSchedule& tariff,
                           const DrProgramSpec& dr_spec,
                           const std::vector<int>& realization) {
  const int days = dr_spec.horizon_days();
  if (static_cast<int>(realization.size()) != days) {
    throw std::invalid_argument("realization length must equal the program horizon");
  }
  if (static_cast<int>(trace.hours.size()) != 24 * days ||
      static_cast<int>(trace.days.size()) != days) {
    throw std::invalid_argument("trace must cover all 24*T hours");
  }
  for (int t = 0; t < days; ++t) {
    if (trace.days[t].event_flag != realization[t]) {
      throw std::invalid_argument("realization disagrees with trace event flags on day " +
                                  std::to_string(t + 1));
    }
  }

  // Tariff flows from first principles (net load recomputed per hour).
  double cash = 0.0;
  for (int h = 0; h < 24 * days; ++h) {
    const HourRecord& rec = trace.hours[h];
    const double load = net_load(rec.demand, rec.solar, rec.charge, rec.discharge);
    const HourlyCashFlow flow =
        hourly_cash_flow(load, tariff.purchase_rate[h], tariff.export_rate[h]);
    cash += flow.cost - flow.export_payment;
  }

  // DR accounting replayed from the hourly loads and the realization.
  std::vector<double> history;
  double dr_energy_total = 0.0;
  std::vector<double> interval_reductions;
  std::vector<int> interval_hours;
  double dr_capacity_total = 0.0;
  int current_interval = dr_spec.interval_of_day(1);

  for (int t = 0; t < days; ++t) {
    const int interval = dr_spec.interval_of_day(t + 1);
    if (interval != current_interval) {
      dr_capacity_total +=
          capacity_payment(interval_avg_reduction(interval_reductions, interval_hours),
                           dr_spec.capacity_rate[current_interval]);
      interval_reductions.clear();
      interval_hours.clear();
      current_interval = interval;
    }
    std::vector<double> day_loads(24);
    for (int h = 0; h < 24; ++h) {
      const HourRecord& rec = trace.hours[24 * t + h];
      day_loads[h] = net_load(rec.demand, rec.solar, rec.charge, rec.discharge);
    }
    const double consumption = dr_window_consumption(day_loads, dr_spec.dr_window[t]);
    if (realization[t] == 1) {
      const double base = baseline(history, dr_spec.baseline_days);
      const double delta = reduction(base, consumption, dr_spec.reduction_mode);
      dr_energy_total += energy_payment(delta, dr_spec.energy_rate[t], true);
      interval_reductions.push_back(delta);
      interval_hours.push_back(static_cast<int>(dr_spec.dr_window[t].size()));
    } else {
      history.push_back(consumption);
      if (static_cast<int>(history.size()) > dr_spec.baseline_days) {
        history.erase(history.begin());
      }
    }
  }
  dr_capacity_total +=
      capacity_payment(interval_avg_reduction(interval_reductions, interval_hours),
                       dr_spec.capacity_rate[current_interval]);

  return cash - dr_capacity_total - dr_energy_total;
}

}  // namespace drmpc
