#pragma once

#include "chemolab/grid.hpp"

#include <array>
#include <optional>

namespace chemolab {

/// How a level set is reduced to one front position.
///
/// Radial: the largest distance from `origin` reached by {u >= theta}.
/// Directional: the largest x . direction reached by {u >= theta}.
///
/// Crossings are located along grid lines and linearly interpolated between
/// the last node at or above theta and its outward neighbour.
struct FrontTracking {
  enum class Mode { radial, directional };
  Mode mode = Mode::radial;
  std::array<double, 2> origin{0.0, 0.0};
  std::array<double, 2> direction{1.0, 0.0};

  static FrontTracking radial(std::array<double, 2> origin = {0.0, 0.0}) {
    return {Mode::radial, origin, {1.0, 0.0}};
  }
  static FrontTracking directional(std::array<double, 2> direction) {
    return {Mode::directional, {0.0, 0.0}, direction};
  }
};

/// Absent when theta <= 0, theta >= ||u||, or no node reaches theta.
std::optional<double> front_position(const ScalarField& u, double theta,
                                     const FrontTracking& tracking);

/// Largest x . xi over the box (its support function in direction xi).
double domain_reach(const Grid& grid, std::array<double, 2> direction);

/// True when the level set {u >= theta} comes within `margin` of the part of
/// the boundary the front is heading to: any wall for radial tracking, the
/// far wall along the direction for directional tracking.
bool boundary_margin_guard(const ScalarField& u, double theta, const FrontTracking& tracking,
                           double margin);

} // namespace chemolab
