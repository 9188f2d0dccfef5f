#pragma once

#include "chemolab/grid.hpp"

#include <memory>
#include <span>
#include <vector>

namespace chemolab {

/// Preplanned real transforms for one grid: the discrete Fourier transform on
/// periodic grids, the type-II/III cosine pair on reflecting grids. Plans are
/// created under a process-wide lock; a workspace itself is single-threaded
/// and must not be shared between threads.
class SpectralWorkspace {
public:
  explicit SpectralWorkspace(const Grid& grid);
  ~SpectralWorkspace();
  SpectralWorkspace(SpectralWorkspace&&) noexcept;
  SpectralWorkspace& operator=(SpectralWorkspace&&) noexcept;
  SpectralWorkspace(const SpectralWorkspace&) = delete;
  SpectralWorkspace& operator=(const SpectralWorkspace&) = delete;

  const Grid& grid() const;
  std::size_t mode_count() const;

  /// |k|^2 of each mode with exact wavenumbers: 2 pi m / L (periodic) or
  /// pi m / L (cosine modes).
  const std::vector<double>& spectral_k2() const;
  /// Symbol of the 3-point (per axis) second-difference Laplacian:
  /// sum_axes (4/h^2) sin^2(k h / 2). On reflecting grids these are the
  /// Neumann eigenvalues of that stencil.
  const std::vector<double>& discrete_k2() const;

  /// out = T^{-1} diag(multiplier) T in. in and out may alias.
  void filter(std::span<const double> in, std::span<const double> multiplier,
              std::span<double> out);

  /// Spectral derivative along `axis` with the Nyquist mode zeroed.
  /// Periodic grids only.
  void derivative(int axis, std::span<const double> in, std::span<double> out);

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

} // namespace chemolab
