#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "drmpc/evaluation.hpp"
#include "drmpc/io_config.hpp"
#include "drmpc/mpc.hpp"
#include "drmpc/rng.hpp"

namespace drmpc::cli {

namespace {

namespace fs = std::filesystem;

constexpr std::uint64_t kRealizationStream = 0xD1CEULL;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> runs;
  std::optional<std::string> events;
  std::optional<std::string> out;
  std::string rates = "2,10";
};

std::vector<int> parse_events(const std::string& text, int days) {
  if (static_cast<int>(text.size()) != days) {
    throw ConfigError("--events must have exactly " + std::to_string(days) + " characters");
  }
  std::vector<int> realization(days);
  for (int t = 0; t < days; ++t) {
    if (text[t] != '0' && text[t] != '1') {
      throw ConfigError("--events accepts only 0/1 characters");
    }
    realization[t] = text[t] - '0';
  }
  return realization;
}

std::vector<double> parse_rates(const std::string& text) {
  std::vector<double> rates;
  std::stringstream stream(text);
  std::string field;
  while (std::getline(stream, field, ',')) {
    try {
      std::size_t used = 0;
      rates.push_back(std::stod(field, &used));
      if (used != field.size()) throw std::invalid_argument(field);
    } catch (const std::exception&) {
      throw ConfigError("--rates expects comma-separated numbers, got '" + field + "'");
    }
    if (rates.back() < 0.0) throw ConfigError("capacity rates must be >= 0");
  }
  if (rates.empty()) throw ConfigError("--rates must name at least one rate");
  return rates;
}

struct Loaded {
  RunConfig config;
  MpcInputs inputs;
  MpcConfig mpc;
  std::string out_dir;
};

Loaded load_everything(const Options& options) {
  Loaded loaded;
  try {
    loaded.config = load_config(options.config_path);
    if (options.seed) loaded.config.master_seed = *options.seed;
    if (options.runs) loaded.config.runs = *options.runs;
    if (options.out) loaded.config.output_dir = *options.out;
    loaded.inputs = loaded.config.assemble();
    loaded.mpc = loaded.config.mpc_config();
    loaded.out_dir = loaded.config.output_dir;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return loaded;
}

std::vector<int> choose_realization(const Loaded& loaded, const Options& options) {
  if (options.events) return parse_events(*options.events, loaded.config.horizon_days);
  return sample_realization(loaded.inputs.events,
                            mix_seed(loaded.config.master_seed, kRealizationStream));
}

std::string format_cell(double v, int digits = 4) {
  if (std::isnan(v)) return "n/a";
  char buffer[48];
  std::snprintf(buffer, sizeof(buffer), "%.*f", digits, v);
  return buffer;
}

void print_metrics_line(const std::string& label, const Metrics& m) {
  std::cout << "  " << label << ": cost=" << format_cell(m.expected_customer_cost)
            << " tariff=" << format_cell(m.expected_tariff_cost)
            << " dr_payment=" << format_cell(m.expected_dr_payment)
            << " dr_kw=" << format_cell(m.dr_quantity, 3)
            << " baseline_kw=" << format_cell(m.baseline_load, 3)
            << " event_kw=" << format_cell(m.event_load, 3) << "\n";
}

int cmd_simulate(const Loaded& loaded, const Options& options) {
  MpcInputs inputs = loaded.inputs;
  inputs.events.realization = choose_realization(loaded, options);

  const SimulationTrace trace = simulate(inputs, loaded.mpc);
  const CounterfactualSchedule cf = counterfactual_dispatch(inputs.profile, inputs.battery);
  const EvaluationReport report = compute_metrics(inputs, {trace}, {1.0}, cf);

  write_report(report, {trace}, loaded.out_dir);
  std::cout << "simulated " << loaded.config.horizon_days << " days (seed "
            << loaded.config.master_seed << "), realized cost "
            << format_cell(trace.total_cost) << "\n";
  print_metrics_line("trace", report.metrics);
  std::cout << "wrote " << (fs::path(loaded.out_dir) / "hourly_trace.csv").string() << "\n";
  return 0;
}

int cmd_exact(const Loaded& loaded) {
  const ExactResult exact = solve_exact(loaded.inputs);
  fs::create_directories(loaded.out_dir);
  nlohmann::json j;
  j["expected_cost"] = exact.expected_cost;
  j["day1_charge"] = exact.day_one.charge;
  j["day1_discharge"] = exact.day_one.discharge;
  std::ofstream out(fs::path(loaded.out_dir) / "exact.json");
  if (!out) throw ConfigError(loaded.out_dir + ": cannot write exact.json");
  out << j.dump(2) << '\n';
  std::cout << "exact expected cost over " << loaded.config.horizon_days
            << " days: " << format_cell(exact.expected_cost) << "\n";
  return 0;
}

int cmd_evaluate(const Loaded& loaded) {
  const EvaluationReport report = evaluate_exhaustive(loaded.inputs, loaded.mpc);
  write_report(report, {}, loaded.out_dir);
  std::cout << "exhaustive evaluation of MPC(N=" << loaded.mpc.receding_horizon
            << ", n=" << loaded.mpc.branching_depth << ")\n";
  print_metrics_line("expected", report.metrics);
  return 0;
}

int cmd_counterfactual(const Loaded& loaded, const Options& options) {
  MpcInputs inputs = loaded.inputs;
  const std::vector<int> realization = choose_realization(loaded, options);
  const CounterfactualSchedule cf = counterfactual_dispatch(inputs.profile, inputs.battery);
  const SimulationTrace trace = assemble_trace(inputs, cf.charge, cf.discharge, realization);
  const EvaluationReport report = compute_metrics(inputs, {trace}, {1.0}, cf);
  write_report(report, {trace}, loaded.out_dir);
  std::cout << "counterfactual dispatch, tariff cost " << format_cell(trace.total_cost) << "\n";
  print_metrics_line("trace", report.metrics);
  return 0;
}

struct StudyRow {
  std::string label;
  int horizon = 0;
  int depth = 0;
  int seeds = 1;
  Metrics mean;
  Metrics stddev;
  bool stochastic = false;
  double gap = 0.0;
};

Metrics metrics_of_exhaustive(const MpcInputs& inputs, int horizon, int depth,
                              std::uint64_t seed, int final_day) {
  MpcConfig config;
  config.receding_horizon = horizon;
  config.branching_depth = depth;
  config.master_seed = seed;
  config.final_day = final_day;
  return evaluate_exhaustive(inputs, config).metrics;
}

int cmd_study_approximation(const Loaded& loaded) {
  const int days = loaded.config.horizon_days;
  if (days > 12) throw ConfigError("study-approximation needs horizon_days <= 12");
  const int seeds = std::max(2, loaded.config.runs);

  const ExactResult exact = solve_exact(loaded.inputs);

  std::vector<StudyRow> rows;
  {
    StudyRow optimal;
    optimal.label = "optimal";
    optimal.horizon = days;
    optimal.depth = days;
    optimal.mean = metrics_of_exhaustive(loaded.inputs, days, days,
                                         loaded.config.master_seed, days);
    optimal.gap = (optimal.mean.expected_customer_cost - exact.expected_cost) /
                  std::abs(exact.expected_cost);
    rows.push_back(optimal);
  }

  const std::vector<std::pair<int, int>> variants = {
      {2, 2}, {4, 4}, {4, 2}, {days, 2}};
  for (const auto& [horizon, depth] : variants) {
    StudyRow row;
    row.horizon = std::min(horizon, days);
    row.depth = std::min(depth, row.horizon);
    row.label = "mpc(N=" + std::to_string(row.horizon) + ",n=" + std::to_string(row.depth) + ")";
    row.stochastic = row.depth < row.horizon;
    if (!row.stochastic) {
      row.mean = metrics_of_exhaustive(loaded.inputs, row.horizon, row.depth,
                                       loaded.config.master_seed, days);
    } else {
      row.seeds = seeds;
      std::vector<Metrics> samples;
      for (int k = 0; k < seeds; ++k) {
        samples.push_back(metrics_of_exhaustive(loaded.inputs, row.horizon, row.depth,
                                                mix_seed(loaded.config.master_seed, 0xA5A0 + k),
                                                days));
      }
      const auto fields = {&Metrics::expected_customer_cost, &Metrics::expected_tariff_cost,
                           &Metrics::expected_dr_payment,    &Metrics::dr_quantity,
                           &Metrics::baseline_load,          &Metrics::event_load};
      for (auto field : fields) {
        double mean = 0.0;
        for (const Metrics& m : samples) mean += m.*field;
        mean /= seeds;
        double var = 0.0;
        for (const Metrics& m : samples) var += (m.*field - mean) * (m.*field - mean);
        row.mean.*field = mean;
        row.stddev.*field = std::sqrt(var / (seeds - 1));
      }
    }
    row.gap = (row.mean.expected_customer_cost - exact.expected_cost) /
              std::abs(exact.expected_cost);
    rows.push_back(row);
  }

  fs::create_directories(loaded.out_dir);
  std::ofstream csv(fs::path(loaded.out_dir) / "approximation.csv");
  if (!csv) throw ConfigError(loaded.out_dir + ": cannot write approximation.csv");
  csv << "case,N,n,seeds,cost,cost_std,gap,dr_kw,dr_kw_std,baseline_kw,baseline_kw_std,"
         "event_kw,event_kw_std\n";
  std::ofstream long_csv(fs::path(loaded.out_dir) / "study_long.csv");
  long_csv << "case,metric,value,std\n";

  std::cout << "approximation study, exact optimum " << format_cell(exact.expected_cost)
            << "\n";
  std::printf("  %-16s %10s %10s %8s %9s %9s %9s\n", "case", "cost", "cost_std", "gap%",
              "dr_kw", "base_kw", "event_kw");
  for (const StudyRow& row : rows) {
    const auto std_cell = [&](double v) { return row.stochastic ? format_cell(v, 6) : ""; };
    csv << row.label << ',' << row.horizon << ',' << row.depth << ',' << row.seeds << ','
        << format_cell(row.mean.expected_customer_cost, 8) << ','
        << std_cell(row.stddev.expected_customer_cost) << ',' << format_cell(row.gap, 8) << ','
        << format_cell(row.mean.dr_quantity, 6) << ',' << std_cell(row.stddev.dr_quantity)
        << ',' << format_cell(row.mean.baseline_load, 6) << ','
        << std_cell(row.stddev.baseline_load) << ',' << format_cell(row.mean.event_load, 6)
        << ',' << std_cell(row.stddev.event_load) << '\n';
    for (const auto& [metric, value, std_value] :
         {std::tuple<const char*, double, double>{"cost", row.mean.expected_customer_cost,
                                                  row.stddev.expected_customer_cost},
          {"gap", row.gap, 0.0},
          {"dr_kw", row.mean.dr_quantity, row.stddev.dr_quantity},
          {"baseline_kw", row.mean.baseline_load, row.stddev.baseline_load},
          {"event_kw", row.mean.event_load, row.stddev.event_load}}) {
      long_csv << row.label << ',' << metric << ',' << format_cell(value, 8) << ','
               << (row.stochastic ? format_cell(std_value, 8) : "") << '\n';
    }
    std::printf("  %-16s %10s %10s %8s %9s %9s %9s\n", row.label.c_str(),
                format_cell(row.mean.expected_customer_cost).c_str(),
                row.stochastic ? format_cell(row.stddev.expected_customer_cost).c_str() : "-",
                format_cell(100 * row.gap, 3).c_str(),
                format_cell(row.mean.dr_quantity, 3).c_str(),
                format_cell(row.mean.baseline_load, 3).c_str(),
                format_cell(row.mean.event_load, 3).c_str());
  }
  std::cout << "wrote " << (fs::path(loaded.out_dir) / "approximation.csv").string() << "\n";
  return 0;
}

int cmd_study_incentives(const Loaded& loaded, const Options& options) {
  const std::vector<double> rates = parse_rates(options.rates);
  const int runs = std::max(2, loaded.config.runs);
  const int days = loaded.config.horizon_days;

  const CounterfactualSchedule cf =
      counterfactual_dispatch(loaded.inputs.profile, loaded.inputs.battery);

  // control group: the counterfactual schedule scored over the same
  // realization draws the rate rows will see, with DR payments off
  MpcInputs no_dr = loaded.inputs;
  for (double& r : no_dr.dr_spec.capacity_rate) r = 0.0;
  no_dr.dr_spec.energy_rate.assign(days, 0.0);
  std::vector<SimulationTrace> cf_traces;
  for (int r = 0; r < runs; ++r) {
    const auto realization = sample_realization(
        loaded.inputs.events, monte_carlo_realization_seed(loaded.config.master_seed, r));
    cf_traces.push_back(assemble_trace(no_dr, cf.charge, cf.discharge, realization));
  }
  const EvaluationReport cf_report =
      compute_metrics(no_dr, cf_traces, std::vector<double>(runs, 1.0), cf);

  fs::create_directories(loaded.out_dir);
  std::ofstream csv(fs::path(loaded.out_dir) / "incentives.csv");
  if (!csv) throw ConfigError(loaded.out_dir + ": cannot write incentives.csv");
  csv << "case,capacity_rate,runs,cost,cost_std,tariff,dr_payment,dr_kw,dr_kw_std,"
         "baseline_kw,event_kw,inflation_kw,inflation_pct,inflation_pct_interval_mean\n";
  std::ofstream long_csv(fs::path(loaded.out_dir) / "study_long.csv");
  long_csv << "case,metric,value,std\n";

  const auto write_row = [&](const std::string& label, double rate, const Metrics& m,
                             const Metrics* sd, const EvaluationReport& report) {
    csv << label << ',' << format_cell(rate, 2) << ',' << runs << ','
        << format_cell(m.expected_customer_cost, 8) << ','
        << (sd ? format_cell(sd->expected_customer_cost, 8) : "") << ','
        << format_cell(m.expected_tariff_cost, 8) << ','
        << format_cell(m.expected_dr_payment, 8) << ',' << format_cell(m.dr_quantity, 6) << ','
        << (sd ? format_cell(sd->dr_quantity, 6) : "") << ','
        << format_cell(m.baseline_load, 6) << ',' << format_cell(m.event_load, 6) << ','
        << format_cell(m.baseline_inflation_kw, 6) << ','
        << format_cell(m.baseline_inflation_pct, 6) << ','
        << format_cell(report.inflation_pct_interval_mean, 6) << '\n';
    for (const auto& [metric, value, std_value] :
         {std::tuple<const char*, double, const double*>{
              "cost", m.expected_customer_cost, sd ? &sd->expected_customer_cost : nullptr},
          {"tariff", m.expected_tariff_cost, nullptr},
          {"dr_payment", m.expected_dr_payment, nullptr},
          {"dr_kw", m.dr_quantity, sd ? &sd->dr_quantity : nullptr},
          {"baseline_kw", m.baseline_load, nullptr},
          {"event_kw", m.event_load, nullptr},
          {"inflation_kw", m.baseline_inflation_kw, nullptr},
          {"inflation_pct", m.baseline_inflation_pct, nullptr}}) {
      long_csv << label << ',' << metric << ',' << format_cell(value, 8) << ','
               << (std_value ? format_cell(*std_value, 8) : "") << '\n';
    }
  };

  std::cout << "incentives study (" << runs << " runs per case)\n";
  write_row("counterfactual", 0.0, cf_report.metrics, nullptr, cf_report);
  print_metrics_line("counterfactual", cf_report.metrics);
  write_monthly_csv(cf_report, (fs::path(loaded.out_dir) / "monthly_counterfactual.csv").string());

  for (double rate : rates) {
    MpcInputs inputs = loaded.inputs;
    for (double& r : inputs.dr_spec.capacity_rate) r = rate;
    const MonteCarloResult result = evaluate_monte_carlo(inputs, loaded.mpc, runs);
    std::ostringstream label;
    label << "rate_" << rate;
    write_row(label.str(), rate, result.pooled.metrics, &result.stddev, result.pooled);
    print_metrics_line(label.str() + " (pooled)", result.pooled.metrics);
    std::cout << "    inflation_kw=" << format_cell(result.pooled.metrics.baseline_inflation_kw, 3)
              << " inflation_pct=" << format_cell(result.pooled.metrics.baseline_inflation_pct, 3)
              << "\n";
    write_monthly_csv(result.pooled,
                      (fs::path(loaded.out_dir) / ("monthly_" + label.str() + ".csv")).string());
  }
  std::cout << "wrote " << (fs::path(loaded.out_dir) / "incentives.csv").string() << "\n";
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"battery scheduling under baseline-based demand response"};
  app.fallthrough(true);

  Options options;
  app.add_option("--config", options.config_path, "run configuration file")->required();
  std::uint64_t seed_value = 0;
  auto* seed_opt = app.add_option("--seed", seed_value, "override master_seed");
  int runs_value = 0;
  auto* runs_opt = app.add_option("--runs", runs_value, "override runs count");
  std::string events_value;
  auto* events_opt =
      app.add_option("--events", events_value, "forced event realization, e.g. 0100110");
  std::string out_value;
  auto* out_opt = app.add_option("--out", out_value, "override output directory");
  app.add_option("--rates", options.rates, "capacity rates for study-incentives");

  auto* sim = app.add_subcommand("simulate", "run one MPC simulation");
  auto* exact = app.add_subcommand("exact", "solve the full stochastic program");
  auto* evaluate = app.add_subcommand("evaluate", "exhaustive policy evaluation");
  auto* counterfactual =
      app.add_subcommand("counterfactual", "greedy tariff-only dispatch trace");
  auto* approx = app.add_subcommand("study-approximation", "solution-quality study");
  auto* incentives = app.add_subcommand("study-incentives", "baseline-inflation study");
  app.require_subcommand(0, 1);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());  // CLI11 convention
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (seed_opt->count() > 0) options.seed = seed_value;
  if (runs_opt->count() > 0) options.runs = runs_value;
  if (events_opt->count() > 0) options.events = events_value;
  if (out_opt->count() > 0) options.out = out_value;

  try {
    const Loaded loaded = load_everything(options);
    std::string command = loaded.config.study;
    if (sim->parsed()) command = "simulate";
    if (exact->parsed()) command = "exact";
    if (evaluate->parsed()) command = "evaluate";
    if (counterfactual->parsed()) command = "counterfactual";
    if (approx->parsed()) command = "study-approximation";
    if (incentives->parsed()) command = "study-incentives";

    try {
      if (command == "simulate") return cmd_simulate(loaded, options);
      if (command == "exact") return cmd_exact(loaded);
      if (command == "evaluate") return cmd_evaluate(loaded);
      if (command == "counterfactual") return cmd_counterfactual(loaded, options);
      if (command == "study-approximation") return cmd_study_approximation(loaded);
      if (command == "study-incentives") return cmd_study_incentives(loaded, options);
      throw ConfigError("unknown study '" + command + "'");
    } catch (const ConfigError&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace drmpc::cli
