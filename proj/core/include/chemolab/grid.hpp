#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace chemolab {

enum class Boundary {
  periodic,
  reflecting, // homogeneous Neumann
};

std::string to_string(Boundary b);
Boundary boundary_from_string(const std::string& name);

/// Uniform box [-extent/2, extent/2) per axis.
///
/// Periodic grids place nodes at -extent/2 + i*h, so an even point count puts
/// a node exactly on the origin. Reflecting grids are cell centred,
/// -extent/2 + (i + 1/2)*h, which is the node set the cosine transform
/// diagonalises.
///
/// 2D storage is row-major with x as the slow index: node (ix, iy) lives at
/// ix * points(1) + iy.
class Grid {
public:
  static constexpr std::size_t min_points = 16;

  /// Throws InvalidArgument on inconsistent input (odd or too few points,
  /// non-positive extent, unequal spacing across axes).
  Grid(int dims, std::span<const double> extent, std::span<const std::size_t> points,
       Boundary boundary);

  static Grid line(double extent, std::size_t points, Boundary boundary);
  static Grid square(double extent, std::size_t points, Boundary boundary);

  int dims() const { return dims_; }
  Boundary boundary() const { return boundary_; }
  double spacing() const { return spacing_; }
  double extent(int axis) const { return extent_[axis]; }
  double half_extent(int axis) const { return 0.5 * extent_[axis]; }
  std::size_t points(int axis) const { return points_[axis]; }
  std::size_t size() const { return size_; }
  /// Lebesgue measure of the box.
  double measure() const;
  /// h^dims, the quadrature weight of one node.
  double cell_volume() const;

  double coordinate(int axis, std::size_t i) const;
  std::size_t index(std::size_t ix, std::size_t iy = 0) const {
    return dims_ == 1 ? ix : ix * points_[1] + iy;
  }
  std::array<std::size_t, 2> unravel(std::size_t linear) const;
  /// Position of a node; unused trailing components are zero.
  std::array<double, 2> position(std::size_t linear) const;

  bool operator==(const Grid&) const = default;

private:
  int dims_;
  Boundary boundary_;
  std::array<double, 2> extent_{};
  std::array<std::size_t, 2> points_{1, 1};
  double spacing_ = 0.0;
  std::size_t size_ = 0;
};

struct ScalarField {
  Grid grid;
  std::vector<double> values;

  explicit ScalarField(const Grid& g, double fill = 0.0)
      : grid(g), values(g.size(), fill) {}
  ScalarField(const Grid& g, std::vector<double> v);

  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
};

/// One N-component vector per node; components stored as separate planes.
struct VectorField {
  Grid grid;
  std::array<std::vector<double>, 2> components;

  explicit VectorField(const Grid& g);
  /// Euclidean norm at one node.
  double magnitude(std::size_t node) const;
};

using SpaceTimeFunction = std::function<double(std::span<const double>, double)>;

/// Samples f at every node. Throws InvalidArgument naming the node position
/// when a sample is not finite.
ScalarField field_from_function(const Grid& grid, const SpaceTimeFunction& f,
                                double t = 0.0);

struct Extrema {
  double min = 0.0;
  double max = 0.0;
};

Extrema extrema(const ScalarField& f);
/// Spacing-weighted sum, the rectangle-rule integral over the box.
double mass(const ScalarField& f);
double linf(const ScalarField& f);
/// sup over nodes of |v(x)|.
double linf(const VectorField& f);

/// CSV with header `x,value` (1D) or `x,y,value` (2D), one node per line in
/// storage order, 17 significant digits.
void write_csv(std::ostream& out, const ScalarField& f);

} // namespace chemolab
