#include "chemolab/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace chemolab {

namespace {

double smoothstep(double z) {
  z = std::clamp(z, 0.0, 1.0);
  return z * z * (3.0 - 2.0 * z);
}

// Index of the node that sample i (possibly outside [0, n)) maps to. Periodic
// wraps; reflecting mirrors about the cell faces, so -1 -> 0 and n -> n - 1.
std::size_t fold(long i, long n, Boundary b) {
  if (b == Boundary::periodic)
    return static_cast<std::size_t>(((i % n) + n) % n);
  const long period = 2 * n;
  long k = ((i % period) + period) % period;
  if (k >= n)
    k = period - 1 - k;
  return static_cast<std::size_t>(k);
}

void gaussian_pass(std::vector<double>& values, const Grid& g, int axis, double sigma) {
  const long n = static_cast<long>(g.points(axis));
  const double h = g.spacing();
  const long radius = static_cast<long>(std::ceil(4.0 * sigma / h));
  std::vector<double> weights(static_cast<std::size_t>(2 * radius + 1));
  double total = 0.0;
  for (long j = -radius; j <= radius; ++j) {
    const double x = static_cast<double>(j) * h / sigma;
    weights[static_cast<std::size_t>(j + radius)] = std::exp(-0.5 * x * x);
    total += weights[static_cast<std::size_t>(j + radius)];
  }
  for (double& w : weights)
    w /= total;

  const std::size_t stride = (g.dims() == 2 && axis == 0) ? g.points(1) : 1;
  const std::size_t lines = g.size() / static_cast<std::size_t>(n);
  std::vector<double> line_in(static_cast<std::size_t>(n));
  for (std::size_t line = 0; line < lines; ++line) {
    const std::size_t base = stride == 1 ? line * static_cast<std::size_t>(n) : line;
    for (long i = 0; i < n; ++i)
      line_in[static_cast<std::size_t>(i)] = values[base + static_cast<std::size_t>(i) * stride];
    for (long i = 0; i < n; ++i) {
      double acc = 0.0;
      for (long j = -radius; j <= radius; ++j)
        acc += weights[static_cast<std::size_t>(j + radius)] *
               line_in[fold(i + j, n, g.boundary())];
      values[base + static_cast<std::size_t>(i) * stride] = acc;
    }
  }
}

ScalarField random_field(const initial::RandomStrictlyPositive& r, std::uint64_t seed,
                         const Grid& g) {
  std::mt19937_64 engine(seed);
  ScalarField u(g);
  // 53 random bits scaled by 2^-53: the same doubles on every platform, which
  // std::uniform_real_distribution does not promise.
  constexpr double scale = 1.0 / 9007199254740992.0;
  for (double& x : u.values)
    x = r.lo + (r.hi - r.lo) * (static_cast<double>(engine() >> 11) * scale);
  for (int axis = 0; axis < g.dims(); ++axis)
    gaussian_pass(u.values, g, axis, r.smoothing);
  for (double& x : u.values)
    x = std::clamp(x, r.lo, r.hi);
  return u;
}

} // namespace

ScalarField make_initial(const Scenario& s) {
  return make_initial(s, s.build_grid());
}

ScalarField make_initial(const Scenario& s, const Grid& grid) {
  return std::visit(
      [&](const auto& d) -> ScalarField {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, initial::Uniform>) {
          return ScalarField(grid, d.value);
        } else if constexpr (std::is_same_v<T, initial::Bump>) {
          ScalarField u(grid);
          for (std::size_t k = 0; k < grid.size(); ++k) {
            const auto x = grid.position(k);
            const double dx = x[0] - d.center[0];
            const double dy = grid.dims() == 2 ? x[1] - d.center[1] : 0.0;
            const double s2 = 1.0 - (dx * dx + dy * dy) / (d.radius * d.radius);
            u[k] = s2 > 0.0 ? d.height * s2 * s2 : 0.0;
          }
          return u;
        } else if constexpr (std::is_same_v<T, initial::FrontLike>) {
          ScalarField u(grid);
          for (std::size_t k = 0; k < grid.size(); ++k) {
            const auto x = grid.position(k);
            double along = x[0] * d.direction[0];
            if (grid.dims() == 2)
              along += x[1] * d.direction[1];
            u[k] = d.height * smoothstep((d.position - along) / d.width);
          }
          return u;
        } else {
          return random_field(d, s.seed, grid);
        }
      },
      s.initial_data);
}

} // namespace chemolab
