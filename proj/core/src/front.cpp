#include "chemolab/front.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace chemolab {

namespace {

struct Crossing {
  std::array<double, 2> point;
};

// Outermost crossing of {u >= theta} on every grid line along `axis`, scanning
// towards `sign`. Lines without any node at or above theta contribute nothing.
void collect_crossings(const ScalarField& u, double theta, int axis, int sign,
                       std::vector<Crossing>& out) {
  const Grid& g = u.grid;
  const std::size_t n = g.points(axis);
  const std::size_t lines = g.size() / n;
  const std::size_t stride = (g.dims() == 2 && axis == 0) ? g.points(1) : 1;
  const double h = g.spacing();
  for (std::size_t line = 0; line < lines; ++line) {
    const std::size_t base = stride == 1 ? line * n : line;
    auto at = [&](std::size_t i) { return u[base + i * stride]; };
    std::optional<std::size_t> outer;
    if (sign > 0) {
      for (std::size_t i = n; i-- > 0;)
        if (at(i) >= theta) {
          outer = i;
          break;
        }
    } else {
      for (std::size_t i = 0; i < n; ++i)
        if (at(i) >= theta) {
          outer = i;
          break;
        }
    }
    if (!outer)
      continue;
    const std::size_t i = *outer;
    auto point = g.position(base + i * stride);
    const bool has_neighbour = sign > 0 ? i + 1 < n : i > 0;
    if (has_neighbour) {
      const double inside = at(i);
      const double outside = sign > 0 ? at(i + 1) : at(i - 1);
      const double frac = (inside - theta) / (inside - outside);
      point[axis] += sign * h * frac;
    }
    out.push_back({point});
  }
}

std::vector<Crossing> crossings(const ScalarField& u, double theta,
                                const FrontTracking& tracking) {
  std::vector<Crossing> out;
  const int dims = u.grid.dims();
  if (tracking.mode == FrontTracking::Mode::radial) {
    for (int axis = 0; axis < dims; ++axis) {
      collect_crossings(u, theta, axis, +1, out);
      collect_crossings(u, theta, axis, -1, out);
    }
  } else {
    int axis = 0;
    if (dims == 2 && std::abs(tracking.direction[1]) > std::abs(tracking.direction[0]))
      axis = 1;
    collect_crossings(u, theta, axis, tracking.direction[axis] >= 0.0 ? +1 : -1, out);
  }
  return out;
}

double dot(const std::array<double, 2>& a, const std::array<double, 2>& b, int dims) {
  double s = a[0] * b[0];
  if (dims == 2)
    s += a[1] * b[1];
  return s;
}

bool theta_admissible(const ScalarField& u, double theta) {
  return theta > 0.0 && theta < linf(u);
}

} // namespace

std::optional<double> front_position(const ScalarField& u, double theta,
                                     const FrontTracking& tracking) {
  if (!theta_admissible(u, theta))
    return std::nullopt;
  const auto found = crossings(u, theta, tracking);
  if (found.empty())
    return std::nullopt;
  const int dims = u.grid.dims();
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& c : found) {
    double value;
    if (tracking.mode == FrontTracking::Mode::radial) {
      const double dx = c.point[0] - tracking.origin[0];
      const double dy = dims == 2 ? c.point[1] - tracking.origin[1] : 0.0;
      value = std::hypot(dx, dy);
    } else {
      value = dot(c.point, tracking.direction, dims);
    }
    best = std::max(best, value);
  }
  return best;
}

double domain_reach(const Grid& grid, std::array<double, 2> direction) {
  double reach = 0.0;
  for (int axis = 0; axis < grid.dims(); ++axis)
    reach += grid.half_extent(axis) * std::abs(direction[axis]);
  return reach;
}

bool boundary_margin_guard(const ScalarField& u, double theta, const FrontTracking& tracking,
                           double margin) {
  if (!theta_admissible(u, theta))
    return false;
  const Grid& g = u.grid;
  const auto found = crossings(u, theta, tracking);
  if (tracking.mode == FrontTracking::Mode::directional) {
    const double reach = domain_reach(g, tracking.direction);
    for (const auto& c : found)
      if (dot(c.point, tracking.direction, g.dims()) > reach - margin)
        return true;
    return false;
  }
  for (const auto& c : found) {
    for (int axis = 0; axis < g.dims(); ++axis)
      if (g.half_extent(axis) - std::abs(c.point[axis]) < margin)
        return true;
  }
  return false;
}

} // namespace chemolab
