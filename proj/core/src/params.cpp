#include "chemolab/params.hpp"

#include "chemolab/errors.hpp"

#include <cmath>
#include <numbers>

namespace chemolab {

namespace {

void require_positive(double value, const std::string& name) {
  if (!(value > 0.0) || !std::isfinite(value))
    throw InvalidArgument(name + " must be a positive finite number");
}

void require_h1(const ParameterSet& p, const char* what) {
  if (!check_h1(p))
    throw HypothesisError(std::string(what) + " requires b_inf > chi*mu");
}

void require_h2(const ParameterSet& p, const char* what) {
  if (!check_h2(p))
    throw HypothesisError(std::string(what) +
                          " requires b_inf > (1 + a_sup/a_inf) chi*mu");
}

} // namespace

double CoefficientSpec::inf() const {
  return base - std::abs(space_amplitude) - std::abs(time_amplitude);
}

double CoefficientSpec::sup() const {
  return base + std::abs(space_amplitude) + std::abs(time_amplitude);
}

double CoefficientSpec::space_factor(std::span<const double> x) const {
  double product = 1.0;
  for (double xi : x)
    product *= std::cos(2.0 * std::numbers::pi * xi / space_wavelength);
  return product;
}

double CoefficientSpec::time_part(double t) const {
  if (time_amplitude == 0.0)
    return 0.0;
  return time_amplitude * std::cos(2.0 * std::numbers::pi * t / time_period);
}

double CoefficientSpec::operator()(std::span<const double> x, double t) const {
  double value = base + time_part(t);
  if (space_amplitude != 0.0)
    value += space_amplitude * space_factor(x);
  return value;
}

void CoefficientSpec::validate(const std::string& name) const {
  require_positive(base, name + ".base");
  require_positive(space_wavelength, name + ".space_wavelength");
  require_positive(time_period, name + ".time_period");
  if (!std::isfinite(space_amplitude) || !std::isfinite(time_amplitude))
    throw InvalidArgument(name + " amplitudes must be finite");
  if (!(inf() > 0.0))
    throw InvalidArgument(name + " must be bounded below by a positive constant "
                                 "(base - |space_amplitude| - |time_amplitude| > 0)");
}

void ParameterSet::validate() const {
  require_positive(chi, "chi");
  require_positive(lambda, "lambda");
  require_positive(mu, "mu");
  if (dims != 1 && dims != 2)
    throw InvalidArgument("dims must be 1 or 2");
  a.validate("a");
  b.validate("b");
}

bool check_h1(const ParameterSet& p) { return p.b.inf() > p.chi_mu(); }

double h2_threshold(const ParameterSet& p) {
  return (1.0 + p.a.sup() / p.a.inf()) * p.chi_mu();
}

bool check_h2(const ParameterSet& p) { return p.b.inf() > h2_threshold(p); }

double h3_threshold(const ParameterSet& p) {
  const double root = std::sqrt(1.0 + p.dims * p.a.inf() / (4.0 * p.lambda));
  return (1.0 + (1.0 + root) * p.a.sup() / (2.0 * p.a.inf())) * p.chi_mu();
}

bool check_h3(const ParameterSet& p) { return p.b.inf() > h3_threshold(p); }

double upper_absorbing_level(const ParameterSet& p) {
  require_h1(p, "upper_absorbing_level");
  return p.a.sup() / (p.b.inf() - p.chi_mu());
}

Rectangle rectangle_bounds(const ParameterSet& p) {
  require_h2(p, "rectangle_bounds");
  const double cm = p.chi_mu();
  const double bi = p.b.inf() - cm;
  const double bs = p.b.sup() - cm;
  const double denominator = bs * bi - cm * cm;
  return {(bi * p.a.inf() - cm * p.a.sup()) / denominator,
          (bs * p.a.sup() - cm * p.a.inf()) / denominator};
}

std::vector<Rectangle> mn_sequence(const ParameterSet& p, std::size_t n) {
  require_h2(p, "mn_sequence");
  const double cm = p.chi_mu();
  const double bi = p.b.inf() - cm;
  const double bs = p.b.sup() - cm;

  std::vector<Rectangle> seq;
  seq.reserve(n + 1);
  double lower = 0.0;
  double upper = (p.a.sup() - cm * lower) / bi;
  seq.push_back({lower, upper});
  for (std::size_t k = 1; k <= n; ++k) {
    const double next_lower = (p.a.inf() - cm * upper) / bs;
    const double next_upper = (p.a.sup() - cm * next_lower) / bi;
    const bool settled = std::abs(next_lower - lower) < 1e-14 &&
                         std::abs(next_upper - upper) < 1e-14;
    lower = next_lower;
    upper = next_upper;
    seq.push_back({lower, upper});
    if (settled)
      break;
  }
  return seq;
}

double upper_spreading_speed(const ParameterSet& p) {
  require_h1(p, "upper_spreading_speed");
  const double cm = p.chi_mu();
  return 2.0 * std::sqrt(p.a.sup()) +
         cm * std::sqrt(static_cast<double>(p.dims)) * p.a.sup() /
             (2.0 * (p.b.inf() - cm) * std::sqrt(p.lambda));
}

double lower_spreading_speed(const ParameterSet& p) {
  if (!check_h3(p))
    throw HypothesisError("lower_spreading_speed requires hypothesis H3");
  const double cm = p.chi_mu();
  const double gap = p.b.inf() - cm;
  return 2.0 * std::sqrt(p.a.inf() - cm * p.a.sup() / gap) -
         cm * std::sqrt(static_cast<double>(p.dims)) * p.a.sup() /
             (2.0 * std::sqrt(p.lambda) * gap);
}

SpreadingSpeeds spreading_speeds(const ParameterSet& p) {
  SpreadingSpeeds speeds;
  speeds.c_plus = upper_spreading_speed(p);
  if (check_h3(p))
    speeds.c_minus = lower_spreading_speed(p);
  return speeds;
}

double finite_time_floor(const ParameterSet& p, double u0_inf, double u0_sup,
                         double horizon, double t) {
  if (!(horizon > 0.0))
    throw InvalidArgument("finite_time_floor: horizon must be positive");
  if (t < 0.0 || t > horizon)
    throw InvalidArgument("finite_time_floor: t must lie in [0, horizon]");
  if (u0_inf < 0.0 || u0_inf > u0_sup)
    throw InvalidArgument("finite_time_floor: need 0 <= u0_inf <= u0_sup");
  if (u0_inf == 0.0)
    return 0.0;
  const double rate =
      p.a.inf() - p.b.sup() * u0_sup * std::exp(horizon * p.a.sup());
  return u0_inf * std::exp(t * rate);
}

double floor_preserving_level(const ParameterSet& p, double horizon) {
  return p.a.inf() * std::exp(-p.a.sup() * horizon) / p.b.sup();
}

double comparison_envelope(const ParameterSet& p, double u0_norm, double t) {
  require_h1(p, "comparison_envelope");
  const double r = p.a.sup();
  const double k = r / (p.b.inf() - p.chi_mu());
  if (u0_norm <= 0.0)
    return 0.0;
  // w(t) = K w0 / (w0 + (K - w0) e^{-rt}), stable for both w0 < K and w0 > K.
  return k * u0_norm / (u0_norm + (k - u0_norm) * std::exp(-r * t));
}

double CubePrincipalPair::eigenfunction(std::span<const double> x) const {
  double value = 1.0;
  for (double xi : x) {
    if (std::abs(xi) >= half_width)
      return 0.0;
    value *= std::cos(std::numbers::pi * xi / (2.0 * half_width));
  }
  return value;
}

CubePrincipalPair cube_principal_pair(double a0, double half_width, int dims) {
  require_positive(half_width, "cube half width");
  if (dims != 1 && dims != 2)
    throw InvalidArgument("cube_principal_pair: dims must be 1 or 2");
  const double pi2 = std::numbers::pi * std::numbers::pi;
  return {a0 - dims * pi2 / (4.0 * half_width * half_width), half_width, dims};
}

TheoreticalBounds theoretical_bounds(const ParameterSet& p) {
  TheoreticalBounds tb;
  tb.h1 = check_h1(p);
  tb.h2 = check_h2(p);
  tb.h3 = check_h3(p);
  if (tb.h1) {
    tb.m_plus = upper_absorbing_level(p);
    tb.c_plus = upper_spreading_speed(p);
  }
  if (tb.h2) {
    const Rectangle r = rectangle_bounds(p);
    tb.m_lower = r.lower;
    tb.m_upper = r.upper;
  }
  if (tb.h3)
    tb.c_minus = lower_spreading_speed(p);
  return tb;
}

} // namespace chemolab
