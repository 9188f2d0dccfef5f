#pragma once

#include "chemolab/front.hpp"
#include "chemolab/grid.hpp"
#include "chemolab/params.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace chemolab {

struct GridSpec {
  std::vector<double> extent;
  std::vector<std::size_t> points;
  Boundary boundary = Boundary::periodic;

  Grid build(int dims) const;
  bool operator==(const GridSpec&) const = default;
};

namespace initial {

struct Uniform {
  double value = 0.0;
  bool operator==(const Uniform&) const = default;
};

/// height * max(0, 1 - |x - center|^2 / radius^2)^2
struct Bump {
  std::array<double, 2> center{0.0, 0.0};
  double radius = 1.0;
  double height = 1.0;
  bool operator==(const Bump&) const = default;
};

/// height * s((position - x . direction) / width), s the smoothstep 3z^2 - 2z^3
/// clamped to [0, 1]: the plateau for x . direction <= position - width, zero
/// for x . direction >= position.
struct FrontLike {
  std::array<double, 2> direction{1.0, 0.0};
  double height = 1.0;
  double position = 0.0;
  double width = 1.0;
  bool operator==(const FrontLike&) const = default;
};

/// Seeded nodewise uniform[lo, hi], convolved with a Gaussian of standard
/// deviation `smoothing`, clamped back into [lo, hi].
struct RandomStrictlyPositive {
  double lo = 0.1;
  double hi = 1.0;
  double smoothing = 1.0;
  bool operator==(const RandomStrictlyPositive&) const = default;
};

} // namespace initial

using InitialData =
    std::variant<initial::Uniform, initial::Bump, initial::FrontLike, initial::RandomStrictlyPositive>;

enum class Check { envelope, global_bound, rectangle, persistence, speed_interval, v_bounds };
std::string to_string(Check c);
std::optional<Check> check_from_string(std::string_view name);

struct Scenario {
  ParameterSet params;
  GridSpec grid;
  InitialData initial_data = initial::Uniform{};
  double t0 = 0.0;
  double t_end = 0.0;
  double monitor_interval = 1.0;
  std::optional<double> dt_max;
  std::set<Check> checks;
  std::uint64_t seed = 0;
  std::optional<double> front_threshold;  // default: default_front_threshold(params)
  double guard_margin_fraction = 0.1;     // fraction of the smallest half extent
  double persistence_horizon = 1.0;
  double speed_window_fraction = 0.5;

  bool spreading() const {
    return std::holds_alternative<initial::Bump>(initial_data) ||
           std::holds_alternative<initial::FrontLike>(initial_data);
  }
  Grid build_grid() const { return grid.build(params.dims); }
  FrontTracking tracking() const;
  double theta() const;

  bool operator==(const Scenario&) const = default;
};

/// Parses and validates a scenario document. Throws ConfigError with the
/// dotted path of the offending key.
Scenario parse_scenario(std::string_view text);
Scenario scenario_from_json(const nlohmann::json& doc);
Scenario load_scenario(const std::string& path);

/// Full validation of an in-memory scenario (the same checks parsing does).
void validate(const Scenario& s);

nlohmann::json to_json(const Scenario& s);
nlohmann::json to_json(const ParameterSet& p);
nlohmann::json to_json(const TheoreticalBounds& b);

/// Initial density for the scenario on its grid.
ScalarField make_initial(const Scenario& s);
ScalarField make_initial(const Scenario& s, const Grid& grid);

} // namespace chemolab
