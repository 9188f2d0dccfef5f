#pragma once

#include "chemolab/grid.hpp"
#include "chemolab/spectral.hpp"

#include <cstddef>
#include <string>

namespace chemolab {

/// Solver for the chemical equation (lambda - Delta) v = mu u on one grid.
///
/// Periodic grids are diagonalised by the Fourier transform with exact
/// wavenumbers, v_k = mu u_k / (lambda + |k|^2). Reflecting grids use the
/// cosine transform, which diagonalises the 3-point Neumann Laplacian, so the
/// reflecting solve is exact for that stencil.
class ChemicalSolver {
public:
  explicit ChemicalSolver(const Grid& grid);

  const Grid& grid() const { return workspace_.grid(); }

  ScalarField solve(const ScalarField& u, double lambda, double mu);
  void solve(const ScalarField& u, double lambda, double mu, ScalarField& v);

  /// Spectral on periodic grids (Nyquist zeroed); centred second-order
  /// differences with one-sided second-order closure on reflecting grids.
  VectorField gradient(const ScalarField& v);

  /// The Laplacian the solve inverts: spectral on periodic grids, the 3-point
  /// Neumann stencil on reflecting grids.
  ScalarField laplacian(const ScalarField& v);

  /// max |(lambda - Delta_h) v - mu u|.
  double residual(const ScalarField& u, const ScalarField& v, double lambda, double mu);

  /// Underlying transforms, shared with the time stepper.
  SpectralWorkspace& workspace() { return workspace_; }

private:
  SpectralWorkspace workspace_;
  std::vector<double> multiplier_;
  double cached_lambda_ = -1.0;
};

ScalarField solve_chemical(const ScalarField& u, double lambda, double mu);
VectorField gradient(const ScalarField& v);

/// Measured ratios against the sup-norm bounds on v and grad v.
struct VBoundsReport {
  double v_ratio = 0.0;        // ||v|| / ||u||
  double gradient_ratio = 0.0; // ||grad v|| / ||u||
  double v_bound = 0.0;        // mu / lambda
  double gradient_bound = 0.0; // mu sqrt(N) / sqrt(lambda)
  bool passed = true;
  std::size_t offending_node = 0;
  std::string message;
};

/// Checks ||v|| <= (mu/lambda)||u|| + tol and
/// ||grad v|| <= (mu sqrt(N)/sqrt(lambda))||u|| + tol with tol = 1e-8 ||u||.
VBoundsReport verify_v_bounds(const ScalarField& u, const ScalarField& v,
                              const VectorField& grad_v, double lambda, double mu);

} // namespace chemolab
