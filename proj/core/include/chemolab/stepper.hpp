#pragma once

#include "chemolab/elliptic.hpp"
#include "chemolab/grid.hpp"
#include "chemolab/params.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace chemolab {

/// Density values in [-abort_threshold, 0) are reset to zero (and counted)
/// after a step; anything below -abort_threshold stops the run. Recorded
/// states count as nonnegative when min u >= -clamp_threshold.
inline constexpr double clamp_threshold = 1e-12;
inline constexpr double abort_threshold = 1e-8;

struct SimState {
  ScalarField u;
  ScalarField v;
  double t = 0.0;
  std::size_t step_index = 0;
  std::size_t clamp_count = 0;
  ParameterSet params;
};

struct StepOptions {
  /// Test hook: drop u(a - b u) entirely so only transport remains.
  bool reaction = true;
  /// CFL safety factor applied to both explicit limits.
  double safety = 0.4;
};

/// First-order splitting for
///   u_t = Delta u - chi div(u grad v) + u (a - b u),  (lambda - Delta) v = mu u.
///
/// Per step: conservative chemotactic flux on cell faces (face-averaged u
/// times the face difference of v) and logistic reaction, both explicit with
/// coefficients frozen at the start of the step; then backward Euler for the
/// second-difference Laplacian, one tridiagonal solve per grid line (in 2D
/// the x and y solves are applied in turn); then v is re-solved from the new u.
class Stepper {
public:
  Stepper(const ParameterSet& params, const Grid& grid, StepOptions options = {});

  const Grid& grid() const { return solver_.grid(); }
  const ParameterSet& params() const { return params_; }
  ChemicalSolver& solver() { return solver_; }

  /// Pairs u0 with its chemical and checks nonnegativity of u0.
  SimState initial_state(ScalarField u0, double t0);

  /// safety * min(h / (chi max|grad_h v| + 1e-30), 1 / (a_sup + 2 b_sup ||u||)),
  /// with grad_h v the face differences the flux uses.
  double stable_dt(const SimState& state) const;

  /// Advances state by dt in place. Throws NumericalAbort on values below
  /// -abort_threshold or non-finite values.
  void step(SimState& state, double dt);

private:
  void flux_divergence(const ScalarField& u, const ScalarField& v, std::vector<double>& div) const;

  ParameterSet params_;
  StepOptions options_;
  ChemicalSolver solver_;
  std::vector<double> a_space_;
  std::vector<double> b_space_;
  std::vector<double> divergence_;
};

/// Receives the state at every record time. Returning false halts the run.
class RunObserver {
public:
  virtual ~RunObserver() = default;
  virtual bool on_record(const SimState& state) = 0;
  /// Called after every step; default does nothing.
  virtual void on_step(const SimState&) {}
};

struct RunControl {
  double t_end = 0.0;
  /// Record spacing in time; records land exactly on t0 + k * interval and on t_end.
  double record_interval = 1.0;
  /// Optional cap on dt on top of stable_dt.
  std::optional<double> dt_max;
};

struct RunSummary {
  std::size_t steps = 0;
  std::size_t records = 0;
  bool halted = false; // observer asked to stop before t_end
};

/// Integrates from state.t to control.t_end, calling the observer at the
/// initial time, every record time and the final time.
RunSummary run(Stepper& stepper, SimState& state, const RunControl& control,
               RunObserver& observer);

} // namespace chemolab
