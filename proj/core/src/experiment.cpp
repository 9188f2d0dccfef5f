#include "chemolab/experiment.hpp"

#include "chemolab/csv.hpp"
#include "chemolab/errors.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>

namespace chemolab {

namespace {

class SnapshotObserver : public RunObserver {
public:
  SnapshotObserver(TheoremMonitor& monitor, const SnapshotSink* sink)
      : monitor_(monitor), sink_(sink) {}

  bool on_record(const SimState& state) override {
    if (sink_ && state.step_index == 0)
      sink_->write(state);
    return monitor_.on_record(state);
  }

  void on_step(const SimState& state) override {
    if (sink_ && sink_->every > 0 && state.step_index % sink_->every == 0)
      sink_->write(state);
  }

private:
  TheoremMonitor& monitor_;
  const SnapshotSink* sink_;
};

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out)
    throw Error("cannot write " + path.string());
  return out;
}

nlohmann::json number_map(const std::map<std::string, double>& m) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [k, v] : m)
    out[k] = v;
  return out;
}

} // namespace

Simulation simulate(const Scenario& s, const SnapshotSink* snapshots) {
  const Grid grid = s.build_grid();
  Stepper stepper(s.params, grid);

  MonitorSettings settings;
  settings.theta = s.theta();
  settings.tracking = s.tracking();
  if (s.spreading()) {
    double half = grid.half_extent(0);
    for (int axis = 1; axis < grid.dims(); ++axis)
      half = std::min(half, grid.half_extent(axis));
    settings.guard_margin = s.guard_margin_fraction * half;
  }
  TheoremMonitor monitor(s.params, stepper.solver(), settings);
  SnapshotObserver observer(monitor, snapshots);

  Simulation sim;
  RunControl control;
  control.t_end = s.t_end;
  control.record_interval = s.monitor_interval;
  control.dt_max = s.dt_max;
  try {
    SimState state = stepper.initial_state(make_initial(s, grid), s.t0);
    run(stepper, state, control, observer);
  } catch (const NumericalAbort& e) {
    sim.abort_message = e.what();
  }
  sim.trajectory = monitor.take();
  return sim;
}

const CheckReport* ExperimentResult::report(const std::string& name) const {
  for (const auto& r : reports)
    if (r.name == name)
      return &r;
  return nullptr;
}

ExperimentResult evaluate(const Scenario& s, Simulation sim) {
  ExperimentResult result;
  result.bounds = theoretical_bounds(s.params);
  result.simulation = std::move(sim);
  const Trajectory& tr = result.simulation.trajectory;
  const ParameterSet& p = s.params;

  if (s.spreading()) {
    try {
      result.speed = estimate_speed(tr, s.speed_window_fraction);
    } catch (const InsufficientData&) {
    }
  }

  for (Check c : s.checks) {
    switch (c) {
    case Check::envelope:
      result.reports.push_back(check_envelope(tr, p));
      break;
    case Check::global_bound:
      result.reports.push_back(check_global_bound(tr, p));
      break;
    case Check::v_bounds:
      result.reports.push_back(check_v_bounds(tr));
      break;
    case Check::rectangle:
      result.reports.push_back(check_rectangle_invariance(tr, p));
      break;
    case Check::persistence:
      result.reports.push_back(check_persistence(tr, p, s.persistence_horizon));
      break;
    case Check::speed_interval: {
      if (!s.spreading()) {
        CheckReport r;
        r.name = "speed_interval";
        r.message = "initial data is neither a bump nor front-like";
        result.reports.push_back(r);
      } else if (!result.speed) {
        CheckReport r;
        r.name = "speed_interval";
        r.status = check_h1(p) ? CheckStatus::failed : CheckStatus::skipped;
        r.message = "fewer than 10 front positions in the fit window";
        result.reports.push_back(r);
      } else {
        result.reports.push_back(check_speed_interval(*result.speed, p, tr));
      }
      break;
    }
    }
  }

  if (result.simulation.abort_message)
    result.exit_code = ExitCode::numerical_abort;
  else if (tr.truncation_limited)
    result.exit_code = ExitCode::truncation_limited;
  else if (std::any_of(result.reports.begin(), result.reports.end(),
                       [](const CheckReport& r) { return r.failed(); }))
    result.exit_code = ExitCode::check_failed;
  return result;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
  out << "t,u_min,u_max,v_min,v_max,mass,front_plus,front_minus,clamp_count\n";
  for (const auto& r : trajectory.records) {
    out << format_number(r.t) << ',' << format_number(r.u_min) << ','
        << format_number(r.u_max) << ',' << format_number(r.v_min) << ','
        << format_number(r.v_max) << ',' << format_number(r.mass) << ','
        << format_number(r.front_plus) << ',' << format_number(r.front_minus) << ','
        << r.clamp_count << '\n';
  }
}

nlohmann::json report_json(const Scenario& s, const ExperimentResult& result) {
  using nlohmann::json;
  const Trajectory& tr = result.trajectory();
  json doc;
  doc["scenario"] = to_json(s);
  doc["theoretical_bounds"] = to_json(result.bounds);
  doc["exit_code"] = static_cast<int>(result.exit_code);
  doc["truncation_limited"] = tr.truncation_limited;
  doc["numerical_abort"] =
      result.simulation.abort_message ? json(*result.simulation.abort_message) : json(nullptr);
  doc["steps"] = tr.steps;
  doc["records"] = tr.records.size();
  doc["final_time"] = tr.records.empty() ? json(nullptr) : json(tr.records.back().t);
  doc["front_threshold"] = tr.theta;

  double residual = 0.0;
  std::size_t clamps = 0;
  for (const auto& r : tr.records) {
    residual = std::max(residual, r.elliptic_residual);
    clamps = std::max(clamps, r.clamp_count);
  }
  doc["max_relative_elliptic_residual"] = residual;
  doc["clamp_count"] = clamps;

  if (result.speed) {
    const SpeedFit& f = *result.speed;
    doc["speed"] = {{"measured", f.speed},   {"intercept", f.intercept},
                    {"window_start", f.t_a}, {"window_end", f.t_b},
                    {"residual", f.residual}, {"samples", f.samples},
                    {"theta", f.theta}};
  } else {
    doc["speed"] = nullptr;
  }

  json checks = json::array();
  for (const auto& r : result.reports)
    checks.push_back({{"name", r.name},
                      {"status", to_string(r.status)},
                      {"message", r.message},
                      {"theory", number_map(r.theory)},
                      {"measured", number_map(r.measured)}});
  doc["checks"] = checks;
  return doc;
}

ExperimentResult run_experiment(const Scenario& s,
                                const std::optional<std::filesystem::path>& out_dir,
                                std::size_t snapshot_every) {
  SnapshotSink sink;
  const SnapshotSink* sink_ptr = nullptr;
  if (out_dir) {
    std::filesystem::create_directories(*out_dir);
    if (snapshot_every > 0) {
      const auto dir = *out_dir / "snapshots";
      std::filesystem::create_directories(dir);
      sink.every = snapshot_every;
      sink.write = [dir](const SimState& state) {
        char name[64];
        std::snprintf(name, sizeof name, "u_%08zu.csv", state.step_index);
        auto out = open_output(dir / name);
        write_csv(out, state.u);
      };
      sink_ptr = &sink;
    }
  }

  ExperimentResult result = evaluate(s, simulate(s, sink_ptr));
  if (!out_dir)
    return result;

  const Trajectory& tr = result.trajectory();
  {
    auto out = open_output(*out_dir / "trajectory.csv");
    write_trajectory_csv(out, tr);
  }
  if (tr.final_u) {
    auto out = open_output(*out_dir / "final_u.csv");
    write_csv(out, *tr.final_u);
  }
  if (tr.final_v) {
    auto out = open_output(*out_dir / "final_v.csv");
    write_csv(out, *tr.final_v);
  }
  {
    auto out = open_output(*out_dir / "report.json");
    out << report_json(s, result).dump(2) << '\n';
  }
  return result;
}

} // namespace chemolab
