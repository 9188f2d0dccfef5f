#pragma once

#include "chemolab/analysis.hpp"
#include "chemolab/scenario.hpp"

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace chemolab {

enum class ExitCode : int {
  ok = 0,
  check_failed = 1,
  config_error = 2,
  numerical_abort = 3,
  truncation_limited = 4,
};

/// Called with the state every `every` steps (and at step 0).
struct SnapshotSink {
  std::size_t every = 0;
  std::function<void(const SimState&)> write;
};

struct Simulation {
  Trajectory trajectory;
  /// Set when the stepper aborted; the trajectory then holds the records up to
  /// the abort.
  std::optional<std::string> abort_message;
};

/// Builds the grid, initial data and monitor for the scenario and integrates
/// it. Numerical aborts are caught and reported in the result.
Simulation simulate(const Scenario& s, const SnapshotSink* snapshots = nullptr);

struct ExperimentResult {
  TheoreticalBounds bounds;
  Simulation simulation;
  std::optional<SpeedFit> speed;
  std::vector<CheckReport> reports;
  ExitCode exit_code = ExitCode::ok;

  const Trajectory& trajectory() const { return simulation.trajectory; }
  const CheckReport* report(const std::string& name) const;
};

/// Runs the enabled checks against a finished simulation and fills in the
/// exit code: abort beats guard trip beats check failure.
ExperimentResult evaluate(const Scenario& s, Simulation sim);

/// simulate + evaluate, then writes trajectory.csv, final_u.csv, final_v.csv
/// and report.json into out_dir when given. `snapshot_every` > 0 also dumps
/// snapshots/u_<step>.csv every that many steps.
ExperimentResult run_experiment(const Scenario& s,
                                const std::optional<std::filesystem::path>& out_dir,
                                std::size_t snapshot_every = 0);

/// Columns t,u_min,u_max,v_min,v_max,mass,front_plus,front_minus,clamp_count.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);

nlohmann::json report_json(const Scenario& s, const ExperimentResult& result);

struct SweepRow {
  double value = 0.0;
  std::optional<TheoreticalBounds> bounds;
  std::optional<double> measured_speed;
  int exit_code = 0;
  std::vector<CheckReport> reports;
  std::string error;
};

/// Sets one parameter of a scenario by name: chi, lambda, mu or
/// a.<field> / b.<field> with <field> one of base, space_amplitude,
/// space_wavelength, time_amplitude, time_period. Throws InvalidArgument on
/// an unknown name.
void apply_axis(Scenario& s, const std::string& axis, double value);

/// Thread count for sweeps: CHEMOLAB_THREADS when set to a positive integer,
/// else the hardware concurrency, never more than `points`.
std::size_t sweep_threads(std::size_t points);

/// Runs every point on its own copy of the scenario, `threads` at a time.
/// With out_dir, point i writes into out_dir/point_<i> and the table goes to
/// out_dir/summary.csv. Rows come back in input order.
std::vector<SweepRow> sweep(const Scenario& base, const std::string& axis,
                            const std::vector<double>& values,
                            const std::optional<std::filesystem::path>& out_dir,
                            std::size_t threads);

void write_summary_csv(std::ostream& out, const std::string& axis, const Scenario& base,
                       const std::vector<SweepRow>& rows);

} // namespace chemolab
