#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace chemolab {

/// Closed-form growth/limitation coefficient
///
///   c(x,t) = base + space_amplitude * prod_i cos(2 pi x_i / space_wavelength)
///                 + time_amplitude  * cos(2 pi t / time_period)
///
/// The family is smooth, and its infimum and supremum over space-time are
/// known exactly, which is all the closed-form bounds consume.
struct CoefficientSpec {
  double base = 1.0;
  double space_amplitude = 0.0;
  double space_wavelength = 1.0;
  double time_amplitude = 0.0;
  double time_period = 1.0;

  static CoefficientSpec constant(double value) { return {value, 0.0, 1.0, 0.0, 1.0}; }

  double inf() const;
  double sup() const;

  /// prod_i cos(2 pi x_i / space_wavelength)
  double space_factor(std::span<const double> x) const;
  /// time_amplitude * cos(2 pi t / time_period)
  double time_part(double t) const;
  double operator()(std::span<const double> x, double t) const;

  /// Throws InvalidArgument naming `name` unless all lengths are positive and
  /// inf() > 0.
  void validate(const std::string& name) const;

  bool operator==(const CoefficientSpec&) const = default;
};

struct ParameterSet {
  double chi = 1.0;    // chemotactic sensitivity
  double lambda = 1.0; // chemical degradation
  double mu = 1.0;     // chemical production
  int dims = 1;
  CoefficientSpec a;
  CoefficientSpec b;

  /// chi * mu, the combination every threshold is written in.
  double chi_mu() const { return chi * mu; }
  void validate() const;

  bool operator==(const ParameterSet&) const = default;
};

bool check_h1(const ParameterSet& p);
bool check_h2(const ParameterSet& p);
bool check_h3(const ParameterSet& p);

/// Value of b_inf that H2 / H3 require b_inf to exceed strictly.
double h2_threshold(const ParameterSet& p);
double h3_threshold(const ParameterSet& p);

/// a_sup / (b_inf - chi mu); the eventual upper bound on u. Requires H1.
double upper_absorbing_level(const ParameterSet& p);

struct Rectangle {
  double lower = 0.0;
  double upper = 0.0;
};

/// Limits of the invariant rectangle [M_lower, M_upper]. Requires H2.
Rectangle rectangle_bounds(const ParameterSet& p);

/// Iterates
///   upper_k     = (a_sup - chi mu lower_k) / (b_inf - chi mu)
///   lower_{k+1} = (a_inf - chi mu upper_k) / (b_sup - chi mu)
/// from lower_0 = 0 and returns (lower_k, upper_k) for k = 0..n, stopping
/// early once both components move by less than 1e-14. Requires H2.
std::vector<Rectangle> mn_sequence(const ParameterSet& p, std::size_t n);

/// Upper spreading speed; requires H1.
double upper_spreading_speed(const ParameterSet& p);
/// Lower spreading speed; requires H3 (throws HypothesisError otherwise).
double lower_spreading_speed(const ParameterSet& p);

struct SpreadingSpeeds {
  std::optional<double> c_minus; // absent unless H3
  double c_plus = 0.0;
};
/// Both speeds; requires H1. c_minus is left empty when H3 fails.
SpreadingSpeeds spreading_speeds(const ParameterSet& p);

/// Lower bound on inf_x u at elapsed time t in [0, horizon] for data with
/// infimum u0_inf and sup-norm u0_sup.
double finite_time_floor(const ParameterSet& p, double u0_inf, double u0_sup,
                         double horizon, double t);

/// Largest sup-norm of initial data for which finite_time_floor never drops
/// below u0_inf on [0, horizon].
double floor_preserving_level(const ParameterSet& p, double horizon);

/// Closed-form solution of the comparison ODE
///   w' = w (a_sup - (b_inf - chi mu) w),  w(0) = u0_norm
/// at elapsed time t. Requires H1.
double comparison_envelope(const ParameterSet& p, double u0_norm, double t);

/// Principal Dirichlet pair of Delta + a0 on the cube (-L, L)^N.
struct CubePrincipalPair {
  double sigma = 0.0;
  double half_width = 1.0;
  int dims = 1;

  /// prod_i cos(pi x_i / (2L)); equals 1 at the origin, 0 on the boundary.
  double eigenfunction(std::span<const double> x) const;
};
CubePrincipalPair cube_principal_pair(double a0, double half_width, int dims);

struct TheoreticalBounds {
  bool h1 = false;
  bool h2 = false;
  bool h3 = false;
  std::optional<double> m_plus;
  std::optional<double> m_lower;
  std::optional<double> m_upper;
  std::optional<double> c_minus;
  std::optional<double> c_plus;
};

/// Every closed-form quantity whose hypothesis holds for p.
TheoreticalBounds theoretical_bounds(const ParameterSet& p);

} // namespace chemolab
