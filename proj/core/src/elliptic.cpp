#include "chemolab/elliptic.hpp"

#include "chemolab/csv.hpp"
#include "chemolab/errors.hpp"

#include <cmath>

namespace chemolab {

namespace {

void require_same_grid(const ScalarField& a, const Grid& g) {
  if (!(a.grid == g))
    throw InvalidArgument("field lives on a different grid than the solver");
}

// Second-order derivative along one axis of a reflecting grid, with one-sided
// closure at the two ends of every grid line.
void difference_along(const Grid& g, int axis, const std::vector<double>& v,
                      std::vector<double>& out) {
  const std::size_t n = g.points(axis);
  const std::size_t lines = g.size() / n;
  const std::size_t stride = (g.dims() == 2 && axis == 0) ? g.points(1) : 1;
  const double inv2h = 1.0 / (2.0 * g.spacing());
  for (std::size_t line = 0; line < lines; ++line) {
    const std::size_t base = (stride == 1) ? line * n : line;
    auto at = [&](std::size_t i) { return v[base + i * stride]; };
    out[base] = (-3.0 * at(0) + 4.0 * at(1) - at(2)) * inv2h;
    for (std::size_t i = 1; i + 1 < n; ++i)
      out[base + i * stride] = (at(i + 1) - at(i - 1)) * inv2h;
    out[base + (n - 1) * stride] = (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) * inv2h;
  }
}

} // namespace

ChemicalSolver::ChemicalSolver(const Grid& grid)
    : workspace_(grid), multiplier_(workspace_.mode_count()) {}

ScalarField ChemicalSolver::solve(const ScalarField& u, double lambda, double mu) {
  ScalarField v(u.grid);
  solve(u, lambda, mu, v);
  return v;
}

void ChemicalSolver::solve(const ScalarField& u, double lambda, double mu, ScalarField& v) {
  if (!(lambda > 0.0))
    throw InvalidArgument("solve_chemical: lambda must be positive");
  if (!(mu > 0.0))
    throw InvalidArgument("solve_chemical: mu must be positive");
  require_same_grid(u, grid());
  if (!(v.grid == grid()))
    v = ScalarField(grid());
  if (lambda != cached_lambda_) {
    const auto& k2 = grid().boundary() == Boundary::periodic ? workspace_.spectral_k2()
                                                             : workspace_.discrete_k2();
    for (std::size_t m = 0; m < multiplier_.size(); ++m)
      multiplier_[m] = 1.0 / (lambda + k2[m]);
    cached_lambda_ = lambda;
  }
  workspace_.filter(u.values, multiplier_, v.values);
  for (double& x : v.values)
    x *= mu;
}

VectorField ChemicalSolver::gradient(const ScalarField& v) {
  require_same_grid(v, grid());
  VectorField g(grid());
  for (int axis = 0; axis < grid().dims(); ++axis) {
    if (grid().boundary() == Boundary::periodic)
      workspace_.derivative(axis, v.values, g.components[axis]);
    else
      difference_along(grid(), axis, v.values, g.components[axis]);
  }
  return g;
}

ScalarField ChemicalSolver::laplacian(const ScalarField& v) {
  require_same_grid(v, grid());
  ScalarField out(grid());
  if (grid().boundary() == Boundary::periodic) {
    std::vector<double> symbol(workspace_.spectral_k2());
    for (double& s : symbol)
      s = -s;
    workspace_.filter(v.values, symbol, out.values);
    return out;
  }
  // Direct 3-point stencil with mirrored ghost nodes.
  const Grid& g = grid();
  const double inv_h2 = 1.0 / (g.spacing() * g.spacing());
  for (int axis = 0; axis < g.dims(); ++axis) {
    const std::size_t n = g.points(axis);
    const std::size_t stride = (g.dims() == 2 && axis == 0) ? g.points(1) : 1;
    for (std::size_t k = 0; k < g.size(); ++k) {
      const std::size_t i = g.unravel(k)[axis];
      const double left = i == 0 ? v[k] : v[k - stride];
      const double right = i + 1 == n ? v[k] : v[k + stride];
      out[k] += (left - 2.0 * v[k] + right) * inv_h2;
    }
  }
  return out;
}

double ChemicalSolver::residual(const ScalarField& u, const ScalarField& v, double lambda,
                                double mu) {
  const ScalarField lap = laplacian(v);
  double worst = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k)
    worst = std::max(worst, std::abs(lambda * v[k] - lap[k] - mu * u[k]));
  return worst;
}

ScalarField solve_chemical(const ScalarField& u, double lambda, double mu) {
  ChemicalSolver solver(u.grid);
  return solver.solve(u, lambda, mu);
}

VectorField gradient(const ScalarField& v) {
  ChemicalSolver solver(v.grid);
  return solver.gradient(v);
}

VBoundsReport verify_v_bounds(const ScalarField& u, const ScalarField& v,
                              const VectorField& grad_v, double lambda, double mu) {
  VBoundsReport r;
  const double u_norm = linf(u);
  const double tol = 1e-8 * u_norm;
  r.v_bound = mu / lambda;
  r.gradient_bound = mu * std::sqrt(static_cast<double>(u.grid.dims())) / std::sqrt(lambda);
  if (u_norm == 0.0) {
    r.passed = linf(v) == 0.0 && linf(grad_v) == 0.0;
    if (!r.passed)
      r.message = "nonzero chemical for zero density";
    return r;
  }
  double v_max = 0.0;
  double g_max = 0.0;
  std::size_t v_node = 0;
  std::size_t g_node = 0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (std::abs(v[k]) > v_max) {
      v_max = std::abs(v[k]);
      v_node = k;
    }
    const double gm = grad_v.magnitude(k);
    if (gm > g_max) {
      g_max = gm;
      g_node = k;
    }
  }
  r.v_ratio = v_max / u_norm;
  r.gradient_ratio = g_max / u_norm;
  if (v_max > r.v_bound * u_norm + tol) {
    r.passed = false;
    r.offending_node = v_node;
    r.message = "|v| exceeds (mu/lambda)||u|| at node " + std::to_string(v_node) +
                " (x=" + format_number(v.grid.position(v_node)[0]) + ")";
  } else if (g_max > r.gradient_bound * u_norm + tol) {
    r.passed = false;
    r.offending_node = g_node;
    r.message = "|grad v| exceeds mu sqrt(N)/sqrt(lambda) ||u|| at node " +
                std::to_string(g_node) +
                " (x=" + format_number(v.grid.position(g_node)[0]) + ")";
  }
  return r;
}

} // namespace chemolab
