#include "chemolab/stepper.hpp"

#include "chemolab/errors.hpp"

#include <algorithm>
#include <cmath>

namespace chemolab {

namespace {

std::size_t face_stride(const Grid& g, int axis) {
  return (g.dims() == 2 && axis == 0) ? g.points(1) : 1;
}

// Neighbour index along axis in the + direction, or npos past a reflecting wall.
constexpr std::size_t npos = static_cast<std::size_t>(-1);

std::size_t next_node(const Grid& g, int axis, std::size_t k, std::size_t i) {
  const std::size_t n = g.points(axis);
  const std::size_t stride = face_stride(g, axis);
  if (i + 1 < n)
    return k + stride;
  if (g.boundary() == Boundary::periodic)
    return k - (n - 1) * stride;
  return npos;
}

// Backward Euler for u_t = u_xx along every grid line of one axis:
// (1 + 2r) x_i - r (x_{i-1} + x_{i+1}) = d_i, r = dt / h^2, with mirrored
// ends (reflecting) or wrap-around (periodic). Elimination only ever adds
// nonnegative quantities, so zero stays exactly zero and tiny tails keep their
// relative accuracy; a transform would smear round-off of size 1e-16 ||u||
// over the whole domain, which the logistic term then amplifies.
class LineSolver {
public:
  void prepare(std::size_t n, double r, Boundary boundary) {
    n_ = n;
    r_ = r;
    periodic_ = boundary == Boundary::periodic;
    diag_.assign(n, 1.0 + 2.0 * r);
    if (periodic_) {
      // Sherman-Morrison with gamma = -diag: A = B + w y^T, w = -(b, 0.., r),
      // y = (1, 0.., r / b). B stays an M-matrix and the correction is a sum of
      // nonnegative terms.
      const double b = 1.0 + 2.0 * r;
      diag_[0] = 2.0 * b;
      diag_[n - 1] = b + r * r / b;
      weight_ = r / b;
    } else {
      diag_[0] = 1.0 + r;
      diag_[n - 1] = 1.0 + r;
    }
    pivot_.resize(n);
    pivot_[0] = diag_[0];
    for (std::size_t i = 1; i < n; ++i)
      pivot_[i] = diag_[i] - r * r / pivot_[i - 1];
    if (periodic_) {
      // z = B^{-1} |w|, kept as a nonnegative vector
      correction_.assign(n, 0.0);
      correction_[0] = 1.0 + 2.0 * r;
      correction_[n - 1] = r;
      eliminate(correction_.data(), 1);
      denominator_ = 1.0 - (correction_[0] + weight_ * correction_[n - 1]);
    }
  }

  void solve(double* x, std::size_t stride) const {
    eliminate(x, stride);
    if (!periodic_)
      return;
    const double scale = (x[0] + weight_ * x[(n_ - 1) * stride]) / denominator_;
    for (std::size_t i = 0; i < n_; ++i)
      x[i * stride] += scale * correction_[i];
  }

private:
  void eliminate(double* x, std::size_t stride) const {
    for (std::size_t i = 1; i < n_; ++i)
      x[i * stride] += (r_ / pivot_[i - 1]) * x[(i - 1) * stride];
    x[(n_ - 1) * stride] /= pivot_[n_ - 1];
    for (std::size_t i = n_ - 1; i-- > 0;)
      x[i * stride] = (x[i * stride] + r_ * x[(i + 1) * stride]) / pivot_[i];
  }

  std::size_t n_ = 0;
  double r_ = 0.0;
  bool periodic_ = false;
  double weight_ = 0.0;
  double denominator_ = 1.0;
  std::vector<double> diag_;
  std::vector<double> pivot_;
  std::vector<double> correction_;
};

} // namespace

Stepper::Stepper(const ParameterSet& params, const Grid& grid, StepOptions options)
    : params_(params), options_(options), solver_(grid) {
  params_.validate();
  if (params_.dims != grid.dims())
    throw InvalidArgument("parameter dims do not match grid dims");
  a_space_.resize(grid.size());
  b_space_.resize(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto pos = grid.position(k);
    const std::span<const double> x(pos.data(), static_cast<std::size_t>(grid.dims()));
    a_space_[k] = params_.a.base + params_.a.space_amplitude * params_.a.space_factor(x);
    b_space_[k] = params_.b.base + params_.b.space_amplitude * params_.b.space_factor(x);
  }
  divergence_.resize(grid.size());
}

SimState Stepper::initial_state(ScalarField u0, double t0) {
  if (!(u0.grid == grid()))
    throw InvalidArgument("initial data lives on a different grid");
  for (std::size_t k = 0; k < u0.size(); ++k) {
    if (!std::isfinite(u0[k]) || u0[k] < 0.0)
      throw InvalidArgument("initial density must be finite and nonnegative (node " +
                            std::to_string(k) + ")");
  }
  SimState s{std::move(u0), ScalarField(grid()), t0, 0, 0, params_};
  solver_.solve(s.u, params_.lambda, params_.mu, s.v);
  return s;
}

double Stepper::stable_dt(const SimState& state) const {
  const Grid& g = grid();
  const double h = g.spacing();
  double grad_max = 0.0;
  for (int axis = 0; axis < g.dims(); ++axis) {
    for (std::size_t k = 0; k < g.size(); ++k) {
      const std::size_t next = next_node(g, axis, k, g.unravel(k)[axis]);
      if (next == npos)
        continue;
      grad_max = std::max(grad_max, std::abs(state.v[next] - state.v[k]) / h);
    }
  }
  const double advective = h / (params_.chi * grad_max + 1e-30);
  const double reactive = 1.0 / (params_.a.sup() + 2.0 * params_.b.sup() * linf(state.u));
  return options_.safety * std::min(advective, reactive);
}

void Stepper::flux_divergence(const ScalarField& u, const ScalarField& v,
                              std::vector<double>& div) const {
  const Grid& g = grid();
  const double inv_h2 = 1.0 / (g.spacing() * g.spacing());
  std::fill(div.begin(), div.end(), 0.0);
  for (int axis = 0; axis < g.dims(); ++axis) {
    for (std::size_t k = 0; k < g.size(); ++k) {
      const std::size_t next = next_node(g, axis, k, g.unravel(k)[axis]);
      if (next == npos)
        continue; // no-flux wall
      // F_{k+1/2} * h = (u_k + u_next)/2 * (v_next - v_k)
      const double flux = 0.5 * (u[k] + u[next]) * (v[next] - v[k]) * inv_h2;
      div[k] += flux;
      div[next] -= flux;
    }
  }
}

void Stepper::step(SimState& state, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw InvalidArgument("step: dt must be positive");
  const Grid& g = grid();
  flux_divergence(state.u, state.v, divergence_);

  const double a_time = params_.a.time_part(state.t);
  const double b_time = params_.b.time_part(state.t);
  const double chi = params_.chi;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double u = state.u[k];
    double rhs = -chi * divergence_[k];
    if (options_.reaction)
      rhs += u * ((a_space_[k] + a_time) - (b_space_[k] + b_time) * u);
    state.u[k] = u + dt * rhs;
  }

  const double r = dt / (g.spacing() * g.spacing());
  LineSolver lines;
  for (int axis = 0; axis < g.dims(); ++axis) {
    const std::size_t n = g.points(axis);
    const std::size_t stride = face_stride(g, axis);
    lines.prepare(n, r, g.boundary());
    const std::size_t count = g.size() / n;
    for (std::size_t line = 0; line < count; ++line)
      lines.solve(state.u.values.data() + (stride == 1 ? line * n : line), stride);
  }

  const std::size_t step_number = state.step_index + 1;
  for (std::size_t k = 0; k < g.size(); ++k) {
    double& u = state.u[k];
    if (!std::isfinite(u))
      throw NumericalAbort("non-finite density at step " + std::to_string(step_number) +
                               ", node " + std::to_string(k),
                           step_number, k, u);
    if (u < 0.0) {
      if (u < -abort_threshold)
        throw NumericalAbort("density fell to " + std::to_string(u) + " at step " +
                                 std::to_string(step_number) + ", node " +
                                 std::to_string(k),
                             step_number, k, u);
      u = 0.0;
      ++state.clamp_count;
    }
  }

  solver_.solve(state.u, params_.lambda, params_.mu, state.v);
  state.t += dt;
  state.step_index = step_number;
}

RunSummary run(Stepper& stepper, SimState& state, const RunControl& control,
               RunObserver& observer) {
  if (control.t_end < state.t)
    throw InvalidArgument("run: t_end precedes the current time");
  if (!(control.record_interval > 0.0))
    throw InvalidArgument("run: record interval must be positive");

  RunSummary summary;
  const double t0 = state.t;
  const double scale = std::max({1.0, std::abs(t0), std::abs(control.t_end)});
  const double eps = 1e-12 * scale;

  ++summary.records;
  if (!observer.on_record(state)) {
    summary.halted = true;
    return summary;
  }

  std::size_t k = 1;
  auto record_time = [&](std::size_t index) {
    return std::min(control.t_end, t0 + static_cast<double>(index) * control.record_interval);
  };
  while (state.t < control.t_end - eps) {
    double target = record_time(k);
    while (target <= state.t + eps && target < control.t_end)
      target = record_time(++k);

    double dt = stepper.stable_dt(state);
    if (control.dt_max)
      dt = std::min(dt, *control.dt_max);
    bool lands = false;
    if (state.t + dt >= target - eps) {
      dt = target - state.t;
      lands = true;
    }
    stepper.step(state, dt);
    ++summary.steps;
    if (lands)
      state.t = target; // remove round-off so records sit on the nominal times
    observer.on_step(state);
    if (lands) {
      ++summary.records;
      ++k;
      if (!observer.on_record(state)) {
        summary.halted = state.t < control.t_end - eps;
        return summary;
      }
    }
  }
  return summary;
}

} // namespace chemolab
