#include "chemolab/csv.hpp"
#include "chemolab/errors.hpp"
#include "chemolab/experiment.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

using namespace chemolab;

int config_failure(const std::exception& e) {
  std::cerr << "config error: " << e.what() << '\n';
  return static_cast<int>(ExitCode::config_error);
}

void print_summary(const ExperimentResult& r) {
  const auto& tr = r.trajectory();
  std::cout << "records " << tr.records.size() << ", steps " << tr.steps;
  if (!tr.records.empty())
    std::cout << ", final t " << format_number(tr.records.back().t);
  std::cout << '\n';
  if (r.speed)
    std::cout << "front speed " << format_number(r.speed->speed) << " over ["
              << format_number(r.speed->t_a) << ", " << format_number(r.speed->t_b) << "]\n";
  for (const auto& c : r.reports) {
    std::cout << "  " << c.name << ": " << to_string(c.status);
    if (!c.message.empty())
      std::cout << " (" << c.message << ')';
    std::cout << '\n';
  }
  if (r.simulation.abort_message)
    std::cout << "numerical abort: " << *r.simulation.abort_message << '\n';
  if (tr.truncation_limited)
    std::cout << "front reached the guard margin; run truncated\n";
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parabolic-elliptic chemotaxis simulator with theorem checks"};
  app.require_subcommand(1);

  std::string config;
  std::string out_dir = "out";
  std::size_t snapshots = 0;
  auto* simulate_cmd = app.add_subcommand("simulate", "Run one scenario and check it");
  simulate_cmd->add_option("config", config, "Scenario JSON file")->required();
  simulate_cmd->add_option("--out", out_dir, "Output directory")->capture_default_str();
  simulate_cmd->add_option("--snapshots", snapshots, "Dump u every K steps (0: never)");

  std::string axis;
  std::string values;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a scenario over one parameter axis");
  sweep_cmd->add_option("config", config, "Scenario JSON file")->required();
  sweep_cmd->add_option("--axis", axis, "chi, lambda, mu, a.<field> or b.<field>")->required();
  sweep_cmd->add_option("--values", values, "Comma separated values")->required();
  sweep_cmd->add_option("--out", out_dir, "Output directory")->capture_default_str();

  auto* bounds_cmd = app.add_subcommand("bounds", "Print the closed-form bounds only");
  bounds_cmd->add_option("config", config, "Scenario JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ExitCode::config_error);
  }

  Scenario scenario;
  try {
    scenario = load_scenario(config);
  } catch (const ConfigError& e) {
    return config_failure(e);
  }

  try {
    if (*bounds_cmd) {
      std::cout << to_json(theoretical_bounds(scenario.params)).dump(2) << '\n';
      return 0;
    }
    if (*simulate_cmd) {
      const ExperimentResult result = run_experiment(scenario, out_dir, snapshots);
      print_summary(result);
      return static_cast<int>(result.exit_code);
    }
    std::vector<double> list;
    try {
      list = parse_number_list(values);
    } catch (const InvalidArgument& e) {
      return config_failure(e);
    }
    std::vector<SweepRow> rows;
    try {
      rows = sweep(scenario, axis, list, out_dir, sweep_threads(list.size()));
    } catch (const InvalidArgument& e) {
      return config_failure(e);
    }
    write_summary_csv(std::cout, axis, scenario, rows);
    return 0;
  } catch (const NumericalAbort& e) {
    std::cerr << "numerical abort: " << e.what() << '\n';
    return static_cast<int>(ExitCode::numerical_abort);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::numerical_abort);
  }
}
