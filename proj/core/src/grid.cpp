#include "chemolab/grid.hpp"

#include "chemolab/csv.hpp"
#include "chemolab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace chemolab {

std::string to_string(Boundary b) {
  return b == Boundary::periodic ? "periodic" : "reflecting";
}

Boundary boundary_from_string(const std::string& name) {
  if (name == "periodic")
    return Boundary::periodic;
  if (name == "reflecting")
    return Boundary::reflecting;
  throw InvalidArgument("unknown boundary mode '" + name +
                        "' (expected periodic or reflecting)");
}

Grid::Grid(int dims, std::span<const double> extent,
           std::span<const std::size_t> points, Boundary boundary)
    : dims_(dims), boundary_(boundary) {
  if (dims != 1 && dims != 2)
    throw InvalidArgument("grid dims must be 1 or 2");
  if (extent.size() != static_cast<std::size_t>(dims) ||
      points.size() != static_cast<std::size_t>(dims))
    throw InvalidArgument("grid extent/points must have one entry per axis");
  size_ = 1;
  for (int axis = 0; axis < dims; ++axis) {
    if (!(extent[axis] > 0.0) || !std::isfinite(extent[axis]))
      throw InvalidArgument("grid extent must be positive");
    if (points[axis] < min_points || points[axis] % 2 != 0)
      throw InvalidArgument("grid points must be even and at least 16");
    extent_[axis] = extent[axis];
    points_[axis] = points[axis];
    size_ *= points[axis];
  }
  spacing_ = extent_[0] / static_cast<double>(points_[0]);
  if (dims == 2) {
    const double other = extent_[1] / static_cast<double>(points_[1]);
    if (std::abs(other - spacing_) > 1e-12 * spacing_)
      throw InvalidArgument("2D grid axes must share the same spacing");
  }
}

Grid Grid::line(double extent, std::size_t points, Boundary boundary) {
  const double e[] = {extent};
  const std::size_t n[] = {points};
  return Grid(1, e, n, boundary);
}

Grid Grid::square(double extent, std::size_t points, Boundary boundary) {
  const double e[] = {extent, extent};
  const std::size_t n[] = {points, points};
  return Grid(2, e, n, boundary);
}

double Grid::measure() const {
  return dims_ == 1 ? extent_[0] : extent_[0] * extent_[1];
}

double Grid::cell_volume() const {
  return dims_ == 1 ? spacing_ : spacing_ * spacing_;
}

double Grid::coordinate(int axis, std::size_t i) const {
  const double offset = boundary_ == Boundary::periodic ? 0.0 : 0.5;
  return -0.5 * extent_[axis] + (static_cast<double>(i) + offset) * spacing_;
}

std::array<std::size_t, 2> Grid::unravel(std::size_t linear) const {
  if (dims_ == 1)
    return {linear, 0};
  return {linear / points_[1], linear % points_[1]};
}

std::array<double, 2> Grid::position(std::size_t linear) const {
  const auto [ix, iy] = unravel(linear);
  if (dims_ == 1)
    return {coordinate(0, ix), 0.0};
  return {coordinate(0, ix), coordinate(1, iy)};
}

ScalarField::ScalarField(const Grid& g, std::vector<double> v)
    : grid(g), values(std::move(v)) {
  if (values.size() != grid.size())
    throw InvalidArgument("field size does not match grid");
}

VectorField::VectorField(const Grid& g) : grid(g) {
  for (int axis = 0; axis < g.dims(); ++axis)
    components[axis].assign(g.size(), 0.0);
}

double VectorField::magnitude(std::size_t node) const {
  double sum = 0.0;
  for (int axis = 0; axis < grid.dims(); ++axis)
    sum += components[axis][node] * components[axis][node];
  return std::sqrt(sum);
}

ScalarField field_from_function(const Grid& grid, const SpaceTimeFunction& f,
                                double t) {
  ScalarField field(grid);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto pos = grid.position(k);
    const double value =
        f(std::span<const double>(pos.data(), static_cast<std::size_t>(grid.dims())), t);
    if (!std::isfinite(value)) {
      std::string where = "x=" + format_number(pos[0]);
      if (grid.dims() == 2)
        where += ", y=" + format_number(pos[1]);
      throw InvalidArgument("non-finite sample at node " + std::to_string(k) +
                            " (" + where + ")");
    }
    field[k] = value;
  }
  return field;
}

Extrema extrema(const ScalarField& f) {
  const auto [lo, hi] = std::minmax_element(f.values.begin(), f.values.end());
  return {*lo, *hi};
}

double mass(const ScalarField& f) {
  double sum = 0.0;
  for (double v : f.values)
    sum += v;
  return sum * f.grid.cell_volume();
}

double linf(const ScalarField& f) {
  double m = 0.0;
  for (double v : f.values)
    m = std::max(m, std::abs(v));
  return m;
}

double linf(const VectorField& f) {
  double m = 0.0;
  for (std::size_t k = 0; k < f.grid.size(); ++k)
    m = std::max(m, f.magnitude(k));
  return m;
}

void write_csv(std::ostream& out, const ScalarField& f) {
  out << (f.grid.dims() == 1 ? "x,value\n" : "x,y,value\n");
  for (std::size_t k = 0; k < f.size(); ++k) {
    const auto pos = f.grid.position(k);
    out << format_number(pos[0]) << ',';
    if (f.grid.dims() == 2)
      out << format_number(pos[1]) << ',';
    out << format_number(f[k]) << '\n';
  }
}

} // namespace chemolab
