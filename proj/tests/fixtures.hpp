#pragma once

#include <cmath>
#include <vector>

#include "drmpc/domain.hpp"
#include "drmpc/rng.hpp"

namespace drmpc::testing {

inline BatterySpec default_battery() {
  return {10.0, 27.0, std::sqrt(0.9), std::sqrt(0.9)};
}

// Evening-peaked demand with midday solar, lightly varied per day.
inline CustomerProfile synthetic_profile(int days, std::uint64_t seed = 7) {
  static const double demand_shape[24] = {0.45, 0.40, 0.38, 0.36, 0.38, 0.50, 0.80, 1.05,
                                          0.95, 0.85, 0.80, 0.85, 0.90, 0.95, 1.00, 1.10,
                                          1.35, 1.70, 1.95, 2.05, 1.85, 1.40, 0.95, 0.60};
  CustomerProfile profile;
  profile.horizon_days = days;
  SplitMix64 rng(seed);
  for (int t = 0; t < days; ++t) {
    const double demand_factor = 0.9 + 0.2 * rng.next_double();
    const double solar_factor = 0.6 + 0.6 * rng.next_double();
    for (int h = 0; h < 24; ++h) {
      profile.demand.push_back(demand_shape[h] * demand_factor);
      const double mid = h + 0.5;
      const double solar =
          (h >= 6 && h <= 18) ? 5.0 * std::exp(-(mid - 12.5) * (mid - 12.5) / (2 * 2.2 * 2.2))
                              : 0.0;
      profile.solar.push_back(solar * solar_factor);
    }
  }
  return profile;
}

inline DrProgramSpec basic_program(int days, double energy_rate, double capacity_rate,
                                   int baseline_days = 3) {
  DrProgramSpec spec;
  spec.dr_window.assign(days, {18, 19, 20, 21});
  spec.baseline_days = baseline_days;
  spec.energy_rate.assign(days, energy_rate);
  spec.capacity_rate = {capacity_rate};
  spec.intervals = {{1, days}};
  return spec;
}

inline CarryState initial_carry(const BatterySpec& battery) {
  CarryState carry;
  carry.stored_energy = 0.5 * battery.energy_capacity_kwh;
  carry.current_day = 1;
  return carry;
}

// Tariff-only cost of a fixed hourly schedule, straight from the domain
// arithmetic; used as an independent route for LP cross-checks.
inline double schedule_tariff_cost(const CustomerProfile& profile, const TariffSchedule& tariff,
                                   const std::vector<double>& charge,
                                   const std::vector<double>& discharge) {
  double total = 0.0;
  for (int h = 0; h < profile.hours(); ++h) {
    const double load = net_load(profile.demand[h], profile.solar[h], charge[h], discharge[h]);
    const auto flow = hourly_cash_flow(load, tariff.purchase_rate[h], tariff.export_rate[h]);
    total += flow.cost - flow.export_payment;
  }
  return total;
}

}  // namespace drmpc::testing
