#pragma once

#include "chemolab/elliptic.hpp"
#include "chemolab/front.hpp"
#include "chemolab/params.hpp"
#include "chemolab/stepper.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace chemolab {

/// Per-record outcome of the continuously monitored bounds; empty when the
/// hypothesis a bound needs does not hold.
struct BoundFlags {
  std::optional<bool> envelope;     // max u <= comparison ODE solution
  std::optional<bool> global_bound; // max u <= max(||u0||, a_sup/(b_inf - chi mu))
  std::optional<bool> v_bounds;     // sup-norm bounds on v and grad v
  std::optional<bool> nonnegative;  // min u >= -clamp_threshold
};

struct MonitorRecord {
  double t = 0.0;
  double u_min = 0.0;
  double u_max = 0.0;
  double v_min = 0.0;
  double v_max = 0.0;
  double mass = 0.0;
  std::optional<double> front_plus;  // largest x . xi reached by {u >= theta}
  std::optional<double> front_minus; // smallest x . xi reached by {u >= theta}
  std::optional<double> front;       // tracked front (radial or directional)
  std::size_t clamp_count = 0;
  BoundFlags flags;
  double envelope = 0.0;          // comparison ODE value at this time (0 if absent)
  double elliptic_residual = 0.0; // max |(lambda - Delta_h) v - mu u| / max(mu ||u||, tiny)
  double v_ratio = 0.0;
  double gradient_ratio = 0.0;
};

struct Trajectory {
  std::vector<MonitorRecord> records;
  double t0 = 0.0;
  double theta = 0.0;
  FrontTracking tracking;
  double u0_inf = 0.0;
  double u0_sup = 0.0;
  std::optional<ScalarField> final_u;
  std::optional<ScalarField> final_v;
  bool truncation_limited = false;
  std::size_t steps = 0;
};

/// Front threshold: M_lower/2 under H2, else a tenth of the absorbing level.
double default_front_threshold(const ParameterSet& p);

struct MonitorSettings {
  double theta = 0.0;
  FrontTracking tracking;
  /// Guard margin; empty disables the guard (non-spreading scenarios).
  std::optional<double> guard_margin;
};

/// Observer that turns a run into a Trajectory, checking the envelope, the
/// global bound, the bounds on v and nonnegativity at every record and
/// tripping the boundary guard when enabled.
class TheoremMonitor : public RunObserver {
public:
  TheoremMonitor(const ParameterSet& p, ChemicalSolver& solver, MonitorSettings settings);

  bool on_record(const SimState& state) override;

  const Trajectory& trajectory() const { return trajectory_; }
  Trajectory take() { return std::move(trajectory_); }

private:
  ParameterSet params_;
  ChemicalSolver& solver_;
  MonitorSettings settings_;
  TheoreticalBounds bounds_;
  Trajectory trajectory_;
  bool started_ = false;
};

struct SpeedFit {
  double theta = 0.0;
  double t_a = 0.0;
  double t_b = 0.0;
  double speed = 0.0;
  double intercept = 0.0;
  double residual = 0.0; // RMS of the linear fit
  std::size_t samples = 0;
};

/// Least-squares line through (t_i, x_i). Needs two distinct times.
SpeedFit fit_line(std::span<const double> t, std::span<const double> x);

/// Slope of the tracked front over the last `window_fraction` of the run.
/// Throws InsufficientData with fewer than 10 usable records in the window.
SpeedFit estimate_speed(const Trajectory& trajectory, double window_fraction = 0.5);

enum class CheckStatus { passed, failed, skipped };
std::string to_string(CheckStatus s);

struct CheckReport {
  std::string name;
  CheckStatus status = CheckStatus::skipped;
  std::string message;
  std::map<std::string, double> theory;
  std::map<std::string, double> measured;

  bool failed() const { return status == CheckStatus::failed; }
};

CheckReport check_envelope(const Trajectory& trajectory, const ParameterSet& p);
CheckReport check_global_bound(const Trajectory& trajectory, const ParameterSet& p);
CheckReport check_v_bounds(const Trajectory& trajectory);

/// Invariance of [M_lower, M_upper]: skipped unless H2 holds and u0 starts
/// inside the rectangle. Default tolerance 1e-4 (M_upper - M_lower + 1).
CheckReport check_rectangle_invariance(const Trajectory& trajectory, const ParameterSet& p,
                                       std::optional<double> tol = std::nullopt);

/// Earliest record time after which every record stays within
/// [M_lower - eps, M_upper + eps]. Requires H2.
std::optional<double> rectangle_entry_time(const Trajectory& trajectory, const ParameterSet& p,
                                           double eps);

/// Finite-time floor on records with t - t0 <= horizon, plus a strictly
/// positive plateau (>= 1e-8) over the latter half of the run. Skipped
/// unless H1 holds and u0 is strictly positive.
CheckReport check_persistence(const Trajectory& trajectory, const ParameterSet& p,
                              double horizon = 1.0);

/// Fitted speed within [c_minus - delta, c_plus + delta] (lower end only under
/// H3), delta = 0.1 (c_plus - c_minus + 1), and sup u <= 1e-4 beyond distance
/// (c_plus + 0.2)(t - t0) at the final record. Skipped unless H1 holds.
CheckReport check_speed_interval(const SpeedFit& fit, const ParameterSet& p,
                                 const Trajectory& trajectory);

/// sup of u over nodes whose distance from the tracking origin (radial) or
/// offset along the direction (directional) is at least `distance`. Empty if
/// no node qualifies.
std::optional<double> far_field_sup(const ScalarField& u, const FrontTracking& tracking,
                                    double distance);

} // namespace chemolab
