#include "chemolab/analysis.hpp"

#include "chemolab/csv.hpp"
#include "chemolab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace chemolab {

namespace {

constexpr double envelope_rel_tol = 1e-6;
constexpr double global_abs_tol = 1e-6;
constexpr double decay_ceiling = 1e-4;
constexpr double decay_speed_margin = 0.2;
constexpr double persistence_zero = 1e-8;

std::string at_time(double t) { return "t=" + format_number(t); }

CheckReport make_report(std::string name) {
  CheckReport r;
  r.name = std::move(name);
  return r;
}

double elapsed_end(const Trajectory& tr) {
  return tr.records.empty() ? tr.t0 : tr.records.back().t;
}

} // namespace

double default_front_threshold(const ParameterSet& p) {
  if (check_h2(p))
    return 0.5 * rectangle_bounds(p).lower;
  if (check_h1(p))
    return 0.1 * upper_absorbing_level(p);
  return 0.1 * p.a.sup() / p.b.inf();
}

TheoremMonitor::TheoremMonitor(const ParameterSet& p, ChemicalSolver& solver,
                               MonitorSettings settings)
    : params_(p), solver_(solver), settings_(settings), bounds_(theoretical_bounds(p)) {
  trajectory_.theta = settings_.theta;
  trajectory_.tracking = settings_.tracking;
}

bool TheoremMonitor::on_record(const SimState& state) {
  const ScalarField& u = state.u;
  const ScalarField& v = state.v;
  const auto ue = extrema(u);
  const auto ve = extrema(v);
  if (!started_) {
    trajectory_.t0 = state.t;
    trajectory_.u0_inf = ue.min;
    trajectory_.u0_sup = ue.max;
    started_ = true;
  }

  MonitorRecord rec;
  rec.t = state.t;
  rec.u_min = ue.min;
  rec.u_max = ue.max;
  rec.v_min = ve.min;
  rec.v_max = ve.max;
  rec.mass = mass(u);
  rec.clamp_count = state.clamp_count;

  const auto& tracking = settings_.tracking;
  const std::array<double, 2> xi = tracking.mode == FrontTracking::Mode::directional
                                       ? tracking.direction
                                       : std::array<double, 2>{1.0, 0.0};
  rec.front_plus = front_position(u, settings_.theta, FrontTracking::directional(xi));
  if (auto back = front_position(u, settings_.theta,
                                 FrontTracking::directional({-xi[0], -xi[1]})))
    rec.front_minus = -*back;
  rec.front = front_position(u, settings_.theta, tracking);

  rec.flags.nonnegative = ue.min >= -clamp_threshold;

  const VectorField grad = solver_.gradient(v);
  const VBoundsReport vb = verify_v_bounds(u, v, grad, params_.lambda, params_.mu);
  rec.flags.v_bounds = vb.passed;
  rec.v_ratio = vb.v_ratio;
  rec.gradient_ratio = vb.gradient_ratio;
  const double scale = std::max(params_.mu * linf(u), std::numeric_limits<double>::min());
  rec.elliptic_residual = solver_.residual(u, v, params_.lambda, params_.mu) / scale;

  if (bounds_.h1) {
    const double elapsed = state.t - trajectory_.t0;
    rec.envelope = comparison_envelope(params_, trajectory_.u0_sup, elapsed);
    rec.flags.envelope = ue.max <= rec.envelope * (1.0 + envelope_rel_tol);
    rec.flags.global_bound =
        ue.max <= std::max(trajectory_.u0_sup, *bounds_.m_plus) + global_abs_tol;
  }

  trajectory_.records.push_back(rec);
  trajectory_.final_u = u;
  trajectory_.final_v = v;
  trajectory_.steps = state.step_index;

  if (settings_.guard_margin &&
      boundary_margin_guard(u, settings_.theta, tracking, *settings_.guard_margin)) {
    trajectory_.truncation_limited = true;
    return false;
  }
  return true;
}

SpeedFit fit_line(std::span<const double> t, std::span<const double> x) {
  if (t.size() != x.size() || t.size() < 2)
    throw InsufficientData("fit_line needs at least two samples");
  const double n = static_cast<double>(t.size());
  double t_mean = 0.0;
  double x_mean = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    t_mean += t[i];
    x_mean += x[i];
  }
  t_mean /= n;
  x_mean /= n;
  double stt = 0.0;
  double stx = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    stt += (t[i] - t_mean) * (t[i] - t_mean);
    stx += (t[i] - t_mean) * (x[i] - x_mean);
  }
  if (!(stt > 0.0))
    throw InsufficientData("fit_line needs two distinct times");
  SpeedFit fit;
  fit.speed = stx / stt;
  fit.intercept = x_mean - fit.speed * t_mean;
  double sse = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double r = x[i] - (fit.intercept + fit.speed * t[i]);
    sse += r * r;
  }
  fit.residual = std::sqrt(sse / n);
  fit.t_a = *std::min_element(t.begin(), t.end());
  fit.t_b = *std::max_element(t.begin(), t.end());
  fit.samples = t.size();
  return fit;
}

SpeedFit estimate_speed(const Trajectory& trajectory, double window_fraction) {
  if (!(window_fraction > 0.0 && window_fraction <= 1.0))
    throw InvalidArgument("window_fraction must lie in (0, 1]");
  if (trajectory.records.empty())
    throw InsufficientData("empty trajectory");
  const double t_end = trajectory.records.back().t;
  const double t_start = t_end - window_fraction * (t_end - trajectory.t0);
  const double eps = 1e-12 * std::max(1.0, std::abs(t_end));
  std::vector<double> ts;
  std::vector<double> xs;
  for (const auto& rec : trajectory.records) {
    if (rec.t + eps >= t_start && rec.front) {
      ts.push_back(rec.t);
      xs.push_back(*rec.front);
    }
  }
  if (ts.size() < 10)
    throw InsufficientData("speed fit needs at least 10 front positions in the window, got " +
                           std::to_string(ts.size()));
  SpeedFit fit = fit_line(ts, xs);
  fit.theta = trajectory.theta;
  fit.t_a = t_start;
  fit.t_b = t_end;
  return fit;
}

std::string to_string(CheckStatus s) {
  switch (s) {
  case CheckStatus::passed:
    return "pass";
  case CheckStatus::failed:
    return "fail";
  case CheckStatus::skipped:
    return "skipped";
  }
  return "unknown";
}

CheckReport check_envelope(const Trajectory& trajectory, const ParameterSet& p) {
  CheckReport r = make_report("envelope");
  if (!check_h1(p)) {
    r.message = "H1 fails; no comparison envelope";
    return r;
  }
  r.theory["a_sup"] = p.a.sup();
  r.theory["b_inf_minus_chi_mu"] = p.b.inf() - p.chi_mu();
  r.theory["rel_tol"] = envelope_rel_tol;
  double worst = 0.0;
  r.status = CheckStatus::passed;
  for (const auto& rec : trajectory.records) {
    if (rec.envelope > 0.0)
      worst = std::max(worst, rec.u_max / rec.envelope);
    if (rec.flags.envelope && !*rec.flags.envelope && r.status == CheckStatus::passed) {
      r.status = CheckStatus::failed;
      r.message = "max u exceeds the comparison envelope at " + at_time(rec.t);
    }
  }
  r.measured["max_ratio_to_envelope"] = worst;
  return r;
}

CheckReport check_global_bound(const Trajectory& trajectory, const ParameterSet& p) {
  CheckReport r = make_report("global_bound");
  if (!check_h1(p)) {
    r.message = "H1 fails; no global bound";
    return r;
  }
  const double bound = std::max(trajectory.u0_sup, upper_absorbing_level(p));
  r.theory["bound"] = bound;
  r.theory["abs_tol"] = global_abs_tol;
  double worst = -std::numeric_limits<double>::infinity();
  r.status = CheckStatus::passed;
  for (const auto& rec : trajectory.records) {
    worst = std::max(worst, rec.u_max);
    if (rec.flags.global_bound && !*rec.flags.global_bound && r.status == CheckStatus::passed) {
      r.status = CheckStatus::failed;
      r.message = "max u exceeds max(||u0||, a_sup/(b_inf - chi mu)) at " + at_time(rec.t);
    }
  }
  r.measured["max_u"] = worst;
  return r;
}

CheckReport check_v_bounds(const Trajectory& trajectory) {
  CheckReport r = make_report("v_bounds");
  r.status = CheckStatus::passed;
  double v_ratio = 0.0;
  double g_ratio = 0.0;
  double residual = 0.0;
  for (const auto& rec : trajectory.records) {
    v_ratio = std::max(v_ratio, rec.v_ratio);
    g_ratio = std::max(g_ratio, rec.gradient_ratio);
    residual = std::max(residual, rec.elliptic_residual);
    if (rec.flags.v_bounds && !*rec.flags.v_bounds && r.status == CheckStatus::passed) {
      r.status = CheckStatus::failed;
      r.message = "bound on v or grad v violated at " + at_time(rec.t);
    }
  }
  r.measured["max_v_ratio"] = v_ratio;
  r.measured["max_gradient_ratio"] = g_ratio;
  r.measured["max_relative_residual"] = residual;
  return r;
}

CheckReport check_rectangle_invariance(const Trajectory& trajectory, const ParameterSet& p,
                                       std::optional<double> tol) {
  CheckReport r = make_report("rectangle");
  if (!check_h2(p)) {
    r.message = "H2 fails; no invariant rectangle";
    return r;
  }
  const Rectangle rect = rectangle_bounds(p);
  const double tolerance = tol.value_or(1e-4 * (rect.upper - rect.lower + 1.0));
  r.theory["m_lower"] = rect.lower;
  r.theory["m_upper"] = rect.upper;
  r.theory["tol"] = tolerance;
  if (trajectory.u0_inf < rect.lower || trajectory.u0_sup > rect.upper) {
    r.message = "initial data not inside [m_lower, m_upper]";
    return r;
  }
  double lower_margin = std::numeric_limits<double>::infinity();
  double upper_margin = std::numeric_limits<double>::infinity();
  r.status = CheckStatus::passed;
  for (const auto& rec : trajectory.records) {
    lower_margin = std::min(lower_margin, rec.u_min - rect.lower);
    upper_margin = std::min(upper_margin, rect.upper - rec.u_max);
    if (r.status == CheckStatus::passed &&
        (rec.u_min < rect.lower - tolerance || rec.u_max > rect.upper + tolerance)) {
      r.status = CheckStatus::failed;
      r.message = "solution left the rectangle at " + at_time(rec.t);
    }
  }
  r.measured["worst_lower_margin"] = lower_margin;
  r.measured["worst_upper_margin"] = upper_margin;
  return r;
}

std::optional<double> rectangle_entry_time(const Trajectory& trajectory, const ParameterSet& p,
                                           double eps) {
  const Rectangle rect = rectangle_bounds(p);
  std::optional<double> entry;
  for (const auto& rec : trajectory.records) {
    const bool inside = rec.u_min >= rect.lower - eps && rec.u_max <= rect.upper + eps;
    if (!inside)
      entry.reset();
    else if (!entry)
      entry = rec.t;
  }
  return entry;
}

CheckReport check_persistence(const Trajectory& trajectory, const ParameterSet& p,
                              double horizon) {
  CheckReport r = make_report("persistence");
  if (!check_h1(p)) {
    r.message = "H1 fails";
    return r;
  }
  if (!(trajectory.u0_inf > 0.0)) {
    r.message = "initial data is not strictly positive";
    return r;
  }
  if (trajectory.records.empty()) {
    r.message = "empty trajectory";
    return r;
  }
  r.theory["horizon"] = horizon;
  r.theory["floor_at_horizon"] =
      finite_time_floor(p, trajectory.u0_inf, trajectory.u0_sup, horizon, horizon);
  r.status = CheckStatus::passed;

  double floor_margin = std::numeric_limits<double>::infinity();
  const double eps = 1e-12 * std::max(1.0, horizon);
  for (const auto& rec : trajectory.records) {
    const double elapsed = rec.t - trajectory.t0;
    if (elapsed > horizon + eps)
      continue;
    const double floor = finite_time_floor(p, trajectory.u0_inf, trajectory.u0_sup, horizon,
                                           std::min(elapsed, horizon));
    floor_margin = std::min(floor_margin, rec.u_min - floor);
    if (rec.u_min < floor * (1.0 - 1e-12) && r.status == CheckStatus::passed) {
      r.status = CheckStatus::failed;
      r.message = "u_min fell below the finite-time floor at " + at_time(rec.t);
    }
  }

  const double t_mid = trajectory.t0 + 0.5 * (elapsed_end(trajectory) - trajectory.t0);
  double plateau = std::numeric_limits<double>::infinity();
  for (const auto& rec : trajectory.records)
    if (rec.t >= t_mid)
      plateau = std::min(plateau, rec.u_min);
  r.measured["finite_time_floor_margin"] = floor_margin;
  r.measured["plateau"] = plateau;
  r.measured["empirical_floor"] = plateau * (1.0 - 1e-3);
  if (!(plateau >= persistence_zero) && r.status == CheckStatus::passed) {
    r.status = CheckStatus::failed;
    r.message = "u_min decayed below 1e-8 over the latter half of the run";
  }
  return r;
}

std::optional<double> far_field_sup(const ScalarField& u, const FrontTracking& tracking,
                                    double distance) {
  const Grid& g = u.grid;
  std::optional<double> sup;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto x = g.position(k);
    const double dx = x[0] - tracking.origin[0];
    const double dy = g.dims() == 2 ? x[1] - tracking.origin[1] : 0.0;
    const double measure = tracking.mode == FrontTracking::Mode::radial
                               ? std::hypot(dx, dy)
                               : dx * tracking.direction[0] + dy * tracking.direction[1];
    if (measure >= distance)
      sup = std::max(sup.value_or(-std::numeric_limits<double>::infinity()), u[k]);
  }
  return sup;
}

CheckReport check_speed_interval(const SpeedFit& fit, const ParameterSet& p,
                                 const Trajectory& trajectory) {
  CheckReport r = make_report("speed_interval");
  if (!check_h1(p)) {
    r.message = "H1 fails; no spreading speed bounds";
    return r;
  }
  const double c_plus = upper_spreading_speed(p);
  const bool h3 = check_h3(p);
  const double c_minus = h3 ? lower_spreading_speed(p) : 0.0;
  const double delta = h3 ? 0.1 * (c_plus - c_minus + 1.0) : 0.1;
  r.theory["c_plus"] = c_plus;
  if (h3)
    r.theory["c_minus"] = c_minus;
  r.theory["delta"] = delta;
  r.measured["speed"] = fit.speed;
  r.measured["fit_residual"] = fit.residual;
  r.measured["window_start"] = fit.t_a;
  r.measured["window_end"] = fit.t_b;
  r.status = CheckStatus::passed;

  if (fit.speed > c_plus + delta) {
    r.status = CheckStatus::failed;
    r.message = "fitted speed above c_plus + delta";
  } else if (h3 && fit.speed < c_minus - delta) {
    r.status = CheckStatus::failed;
    r.message = "fitted speed below c_minus - delta";
  }

  if (!trajectory.final_u) {
    r.status = CheckStatus::failed;
    r.message = "trajectory holds no final state for the decay check";
    return r;
  }
  const double elapsed = elapsed_end(trajectory) - trajectory.t0;
  const double distance = (c_plus + decay_speed_margin) * elapsed;
  r.theory["decay_distance"] = distance;
  r.theory["decay_ceiling"] = decay_ceiling;
  const auto sup = far_field_sup(*trajectory.final_u, trajectory.tracking, distance);
  if (!sup) {
    if (r.status == CheckStatus::passed) {
      r.status = CheckStatus::failed;
      r.message = "decay region beyond (c_plus + 0.2) t lies outside the domain";
    }
    return r;
  }
  r.measured["far_field_sup"] = *sup;
  if (*sup > decay_ceiling && r.status == CheckStatus::passed) {
    r.status = CheckStatus::failed;
    r.message = "u exceeds 1e-4 beyond distance (c_plus + 0.2) t";
  }
  return r;
}

} // namespace chemolab
