#include "chemolab/scenario.hpp"

#include "chemolab/analysis.hpp"
#include "chemolab/errors.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace chemolab {

using nlohmann::json;

namespace {

// A json object together with the dotted path it was reached by. Every key
// read is remembered so leftovers can be reported as unknown.
class Node {
public:
  Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object())
      throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  std::string child_path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key) && !j_.at(key).is_null();
  }

  const json& at(const std::string& key) {
    if (!has(key))
      throw ConfigError(child_path(key), "missing required field");
    return j_.at(key);
  }

  double number(const std::string& key) {
    const json& v = at(key);
    if (!v.is_number())
      throw ConfigError(child_path(key), "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x))
      throw ConfigError(child_path(key), "expected a finite number");
    return x;
  }

  double number_or(const std::string& key, double fallback) {
    return has(key) ? number(key) : fallback;
  }

  std::optional<double> optional_number(const std::string& key) {
    if (!has(key))
      return std::nullopt;
    return number(key);
  }

  std::string string(const std::string& key) {
    const json& v = at(key);
    if (!v.is_string())
      throw ConfigError(child_path(key), "expected a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const std::string& key) {
    const json& v = at(key);
    if (!v.is_array())
      throw ConfigError(child_path(key), "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number())
        throw ConfigError(child_path(key) + "[" + std::to_string(i) + "]", "expected a number");
      out.push_back(v[i].get<double>());
    }
    return out;
  }

  Node object(const std::string& key) { return Node(at(key), child_path(key)); }

  void reject_unknown() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key()))
        throw ConfigError(child_path(it.key()), "unknown key");
  }

private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void positive(double x, const std::string& path) {
  if (!(x > 0.0))
    throw ConfigError(path, "must be positive");
}

CoefficientSpec read_coefficient(Node n) {
  CoefficientSpec c;
  c.base = n.number("base");
  c.space_amplitude = n.number_or("space_amplitude", 0.0);
  c.space_wavelength = n.number_or("space_wavelength", 1.0);
  c.time_amplitude = n.number_or("time_amplitude", 0.0);
  c.time_period = n.number_or("time_period", 1.0);
  n.reject_unknown();
  return c;
}

std::array<double, 2> read_vector(Node& n, const std::string& key, int dims) {
  const auto v = n.numbers(key);
  if (v.size() != static_cast<std::size_t>(dims))
    throw ConfigError(n.child_path(key), "expected " + std::to_string(dims) + " components");
  std::array<double, 2> out{0.0, 0.0};
  for (int i = 0; i < dims; ++i)
    out[i] = v[i];
  return out;
}

InitialData read_initial(Node n, int dims) {
  const std::string type = n.string("type");
  InitialData data;
  if (type == "uniform") {
    data = initial::Uniform{n.number("value")};
  } else if (type == "bump") {
    initial::Bump b;
    b.center = read_vector(n, "center", dims);
    b.radius = n.number("radius");
    b.height = n.number("height");
    data = b;
  } else if (type == "front_like") {
    initial::FrontLike f;
    f.direction = read_vector(n, "direction", dims);
    f.height = n.number("height");
    f.position = n.number("position");
    f.width = n.number("width");
    data = f;
  } else if (type == "random_strictly_positive") {
    initial::RandomStrictlyPositive r;
    r.lo = n.number("lo");
    r.hi = n.number("hi");
    r.smoothing = n.number("smoothing");
    data = r;
  } else {
    throw ConfigError(n.child_path("type"),
                      "unknown initial data type '" + type +
                          "' (uniform, bump, front_like, random_strictly_positive)");
  }
  n.reject_unknown();
  return data;
}

void validate_coefficient(const CoefficientSpec& c, const std::string& path) {
  positive(c.base, path + ".base");
  positive(c.space_wavelength, path + ".space_wavelength");
  positive(c.time_period, path + ".time_period");
  if (!(c.inf() > 0.0))
    throw ConfigError(path, "base - |space_amplitude| - |time_amplitude| must be positive");
}

void validate_periodic_fit(const CoefficientSpec& c, const GridSpec& g, const std::string& path) {
  if (g.boundary != Boundary::periodic || c.space_amplitude == 0.0)
    return;
  for (double extent : g.extent) {
    const double ratio = extent / c.space_wavelength;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio))
      throw ConfigError(path + ".space_wavelength",
                        "periodic grids need the extent to be a whole number of wavelengths");
  }
}

} // namespace

Grid GridSpec::build(int dims) const {
  return Grid(dims, extent, points, boundary);
}

std::string to_string(Check c) {
  switch (c) {
  case Check::envelope:
    return "envelope";
  case Check::global_bound:
    return "global_bound";
  case Check::rectangle:
    return "rectangle";
  case Check::persistence:
    return "persistence";
  case Check::speed_interval:
    return "speed_interval";
  case Check::v_bounds:
    return "v_bounds";
  }
  return "unknown";
}

std::optional<Check> check_from_string(std::string_view name) {
  for (Check c : {Check::envelope, Check::global_bound, Check::rectangle, Check::persistence,
                  Check::speed_interval, Check::v_bounds})
    if (to_string(c) == name)
      return c;
  return std::nullopt;
}

FrontTracking Scenario::tracking() const {
  if (const auto* b = std::get_if<initial::Bump>(&initial_data))
    return FrontTracking::radial(b->center);
  if (const auto* f = std::get_if<initial::FrontLike>(&initial_data)) {
    FrontTracking t = FrontTracking::directional(f->direction);
    t.origin = {f->position * f->direction[0], f->position * f->direction[1]};
    return t;
  }
  return FrontTracking::radial();
}

double Scenario::theta() const {
  return front_threshold.value_or(default_front_threshold(params));
}

void validate(const Scenario& s) {
  const ParameterSet& p = s.params;
  positive(p.chi, "params.chi");
  positive(p.lambda, "params.lambda");
  positive(p.mu, "params.mu");
  if (p.dims != 1 && p.dims != 2)
    throw ConfigError("params.dims", "must be 1 or 2");
  validate_coefficient(p.a, "params.a");
  validate_coefficient(p.b, "params.b");

  const std::size_t dims = static_cast<std::size_t>(p.dims);
  if (s.grid.extent.size() != dims)
    throw ConfigError("grid.extent", "expected one entry per axis");
  if (s.grid.points.size() != dims)
    throw ConfigError("grid.points", "expected one entry per axis");
  for (std::size_t i = 0; i < dims; ++i) {
    positive(s.grid.extent[i], "grid.extent[" + std::to_string(i) + "]");
    if (s.grid.points[i] < Grid::min_points || s.grid.points[i] % 2 != 0)
      throw ConfigError("grid.points[" + std::to_string(i) + "]",
                        "must be even and at least 16");
  }
  if (dims == 2 && std::abs(s.grid.extent[0] / static_cast<double>(s.grid.points[0]) -
                            s.grid.extent[1] / static_cast<double>(s.grid.points[1])) >
                       1e-12 * s.grid.extent[0] / static_cast<double>(s.grid.points[0]))
    throw ConfigError("grid.points", "both axes must share the same spacing");
  validate_periodic_fit(p.a, s.grid, "params.a");
  validate_periodic_fit(p.b, s.grid, "params.b");

  if (!(s.t_end >= s.t0))
    throw ConfigError("t_end", "must not precede t0");
  positive(s.monitor_interval, "monitor_interval");
  if (s.dt_max)
    positive(*s.dt_max, "dt_max");
  if (s.front_threshold)
    positive(*s.front_threshold, "front.theta");
  if (!(s.guard_margin_fraction > 0.0 && s.guard_margin_fraction < 1.0))
    throw ConfigError("front.guard_margin_fraction", "must lie in (0, 1)");
  if (!(s.speed_window_fraction > 0.0 && s.speed_window_fraction <= 1.0))
    throw ConfigError("front.window_fraction", "must lie in (0, 1]");
  positive(s.persistence_horizon, "persistence_horizon");

  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, initial::Uniform>) {
          if (!(d.value >= 0.0))
            throw ConfigError("initial_data.value", "must be nonnegative");
        } else if constexpr (std::is_same_v<T, initial::Bump>) {
          positive(d.radius, "initial_data.radius");
          if (!(d.height >= 0.0))
            throw ConfigError("initial_data.height", "must be nonnegative");
          for (std::size_t i = 0; i < dims; ++i) {
            const double half = 0.5 * s.grid.extent[i];
            if (std::abs(d.center[i]) >= half)
              throw ConfigError("initial_data.center", "must lie inside the domain");
            if (std::abs(d.center[i]) + d.radius >= half)
              throw ConfigError("initial_data.radius",
                                "bump support must lie strictly inside the domain");
          }
        } else if constexpr (std::is_same_v<T, initial::FrontLike>) {
          if (s.grid.boundary != Boundary::reflecting)
            throw ConfigError("initial_data.type", "front_like data needs a reflecting grid");
          const double norm = std::hypot(d.direction[0], d.direction[1]);
          if (std::abs(norm - 1.0) > 1e-9)
            throw ConfigError("initial_data.direction", "must be a unit vector");
          positive(d.width, "initial_data.width");
          if (!(d.height >= 0.0))
            throw ConfigError("initial_data.height", "must be nonnegative");
        } else {
          positive(d.lo, "initial_data.lo");
          if (!(d.hi >= d.lo))
            throw ConfigError("initial_data.hi", "must be at least lo");
          positive(d.smoothing, "initial_data.smoothing");
        }
      },
      s.initial_data);
}

Scenario scenario_from_json(const json& doc) {
  Node root(doc, "");
  Scenario s;

  {
    Node p = root.object("params");
    s.params.chi = p.number("chi");
    s.params.lambda = p.number("lambda");
    s.params.mu = p.number("mu");
    const json& dims = p.at("dims");
    if (!dims.is_number_integer())
      throw ConfigError("params.dims", "expected an integer");
    s.params.dims = dims.get<int>();
    if (s.params.dims != 1 && s.params.dims != 2)
      throw ConfigError("params.dims", "must be 1 or 2");
    s.params.a = read_coefficient(p.object("a"));
    s.params.b = read_coefficient(p.object("b"));
    p.reject_unknown();
  }
  {
    Node g = root.object("grid");
    s.grid.extent = g.numbers("extent");
    const json& pts = g.at("points");
    if (!pts.is_array())
      throw ConfigError("grid.points", "expected an array of integers");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (!pts[i].is_number_unsigned())
        throw ConfigError("grid.points[" + std::to_string(i) + "]",
                          "expected a positive integer");
      s.grid.points.push_back(pts[i].get<std::size_t>());
    }
    try {
      s.grid.boundary = boundary_from_string(g.string("boundary"));
    } catch (const InvalidArgument& e) {
      throw ConfigError("grid.boundary", e.what());
    }
    g.reject_unknown();
  }
  s.initial_data = read_initial(root.object("initial_data"), s.params.dims);
  s.t0 = root.number_or("t0", 0.0);
  s.t_end = root.number("t_end");
  s.monitor_interval = root.number("monitor_interval");
  s.dt_max = root.optional_number("dt_max");
  if (root.has("checks")) {
    const json& checks = root.at("checks");
    if (!checks.is_array())
      throw ConfigError("checks", "expected an array of check names");
    for (std::size_t i = 0; i < checks.size(); ++i) {
      const std::string path = "checks[" + std::to_string(i) + "]";
      if (!checks[i].is_string())
        throw ConfigError(path, "expected a check name");
      const auto c = check_from_string(checks[i].get<std::string>());
      if (!c)
        throw ConfigError(path, "unknown check '" + checks[i].get<std::string>() + "'");
      s.checks.insert(*c);
    }
  }
  if (root.has("seed")) {
    const json& seed = root.at("seed");
    // documents built in code hold signed integers even when nonnegative
    if (!seed.is_number_integer() || (!seed.is_number_unsigned() && seed.get<std::int64_t>() < 0))
      throw ConfigError("seed", "expected a nonnegative integer");
    s.seed = seed.get<std::uint64_t>();
  }
  if (root.has("front")) {
    Node f = root.object("front");
    s.front_threshold = f.optional_number("theta");
    s.guard_margin_fraction = f.number_or("guard_margin_fraction", s.guard_margin_fraction);
    s.speed_window_fraction = f.number_or("window_fraction", s.speed_window_fraction);
    f.reject_unknown();
  }
  s.persistence_horizon = root.number_or("persistence_horizon", s.persistence_horizon);
  root.reject_unknown();

  validate(s);
  return s;
}

Scenario parse_scenario(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("malformed JSON: ") + e.what());
  }
  return scenario_from_json(doc);
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("<file>", "cannot open " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str());
}

namespace {

json coefficient_json(const CoefficientSpec& c) {
  return {{"base", c.base},
          {"space_amplitude", c.space_amplitude},
          {"space_wavelength", c.space_wavelength},
          {"time_amplitude", c.time_amplitude},
          {"time_period", c.time_period}};
}

json vector_json(const std::array<double, 2>& v, int dims) {
  json out = json::array();
  for (int i = 0; i < dims; ++i)
    out.push_back(v[i]);
  return out;
}

json optional_json(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

} // namespace

json to_json(const ParameterSet& p) {
  return {{"chi", p.chi},
          {"lambda", p.lambda},
          {"mu", p.mu},
          {"dims", p.dims},
          {"a", coefficient_json(p.a)},
          {"b", coefficient_json(p.b)}};
}

json to_json(const TheoreticalBounds& b) {
  return {{"h1", b.h1},
          {"h2", b.h2},
          {"h3", b.h3},
          {"m_plus", optional_json(b.m_plus)},
          {"m_lower", optional_json(b.m_lower)},
          {"m_upper", optional_json(b.m_upper)},
          {"c_minus", optional_json(b.c_minus)},
          {"c_plus", optional_json(b.c_plus)}};
}

json to_json(const Scenario& s) {
  json doc;
  doc["params"] = to_json(s.params);
  doc["grid"] = {{"extent", s.grid.extent},
                 {"points", s.grid.points},
                 {"boundary", to_string(s.grid.boundary)}};
  const int dims = s.params.dims;
  doc["initial_data"] = std::visit(
      [&](const auto& d) -> json {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, initial::Uniform>)
          return {{"type", "uniform"}, {"value", d.value}};
        else if constexpr (std::is_same_v<T, initial::Bump>)
          return {{"type", "bump"},
                  {"center", vector_json(d.center, dims)},
                  {"radius", d.radius},
                  {"height", d.height}};
        else if constexpr (std::is_same_v<T, initial::FrontLike>)
          return {{"type", "front_like"},
                  {"direction", vector_json(d.direction, dims)},
                  {"height", d.height},
                  {"position", d.position},
                  {"width", d.width}};
        else
          return {{"type", "random_strictly_positive"},
                  {"lo", d.lo},
                  {"hi", d.hi},
                  {"smoothing", d.smoothing}};
      },
      s.initial_data);
  doc["t0"] = s.t0;
  doc["t_end"] = s.t_end;
  doc["monitor_interval"] = s.monitor_interval;
  if (s.dt_max)
    doc["dt_max"] = *s.dt_max;
  json checks = json::array();
  for (Check c : s.checks)
    checks.push_back(to_string(c));
  doc["checks"] = checks;
  doc["seed"] = s.seed;
  json front = {{"guard_margin_fraction", s.guard_margin_fraction},
                {"window_fraction", s.speed_window_fraction}};
  if (s.front_threshold)
    front["theta"] = *s.front_threshold;
  doc["front"] = front;
  doc["persistence_horizon"] = s.persistence_horizon;
  return doc;
}

} // namespace chemolab
