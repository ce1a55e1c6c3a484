#!/usr/bin/env python3
"""Regenerates the bundled desk instances (data/desk7, data/desk28).

The profiles are synthetic but shaped like a solar-plus-storage residential
customer: evening-peaked demand around 24 kWh/day and midday solar sized so
daily production roughly matches daily demand. Event probabilities are a
smooth seasonal-ish wave with day 1 pinned to a known non-event day.

The CSVs are checked in; rerunning this script reproduces them bit for bit.
"""

import math
import os

DEMAND_SHAPE = [0.45, 0.40, 0.38, 0.36, 0.38, 0.50, 0.80, 1.05,
                0.95, 0.85, 0.80, 0.85, 0.90, 0.95, 1.00, 1.10,
                1.35, 1.70, 1.95, 2.05, 1.85, 1.40, 0.95, 0.60]


def demand(day, hour):
    factor = 1.0 + 0.08 * math.sin(2 * math.pi * (day - 1) / 7.0 + 0.7)
    return DEMAND_SHAPE[hour] * factor


def solar(day, hour, peak):
    if hour < 6 or hour > 18:
        return 0.0
    factor = 0.85 + 0.25 * math.sin(2 * math.pi * (day - 1) / 5.0 + 0.3)
    mid = hour + 0.5
    return peak * math.exp(-((mid - 12.5) ** 2) / (2 * 2.2 ** 2)) * factor


def probability(day, base, swing):
    if day == 1:
        return 0.0
    return round(min(0.95, max(0.0, base + swing * math.sin(2 * math.pi * day / 9.0 + 1.1))), 4)


def write_instance(name, days, solar_peak, prob_base, prob_swing):
    base = os.path.join(os.path.dirname(os.path.abspath(__file__)), name)
    os.makedirs(base, exist_ok=True)
    with open(os.path.join(base, "demand.csv"), "w") as f:
        f.write("hour,value\n")
        for day in range(1, days + 1):
            for hour in range(24):
                f.write(f"{(day - 1) * 24 + hour + 1},{demand(day, hour):.6f}\n")
    with open(os.path.join(base, "solar.csv"), "w") as f:
        f.write("hour,value\n")
        for day in range(1, days + 1):
            for hour in range(24):
                f.write(f"{(day - 1) * 24 + hour + 1},{solar(day, hour, solar_peak):.6f}\n")
    with open(os.path.join(base, "probabilities.csv"), "w") as f:
        f.write("day,probability\n")
        for day in range(1, days + 1):
            f.write(f"{day},{probability(day, prob_base, prob_swing):.4f}\n")


if __name__ == "__main__":
    # desk7: tariff-dominated week with sparse events, for the
    # approximation study
    write_instance("desk7", 7, solar_peak=3.8, prob_base=0.30, prob_swing=0.10)
    # desk28: sunnier month with frequent events, for the incentives study
    write_instance("desk28", 28, solar_peak=5.0, prob_base=0.32, prob_swing=0.18)
    print("wrote desk7 and desk28")
