#include "chemolab/spectral.hpp"

#include "chemolab/errors.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

namespace chemolab {

namespace {

// FFTW's planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

struct PlanDestroy {
  void operator()(fftw_plan p) const {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(p);
  }
};

using PlanHandle = std::unique_ptr<std::remove_pointer_t<fftw_plan>, PlanDestroy>;

double signed_frequency(std::size_t i, std::size_t n) {
  // fftfreq convention; the Nyquist index n/2 maps to +n/2.
  return i <= n / 2 ? static_cast<double>(i)
                    : static_cast<double>(i) - static_cast<double>(n);
}

} // namespace

struct SpectralWorkspace::Impl {
  Grid grid;
  bool periodic;
  std::size_t modes = 0;
  std::unique_ptr<double[], FftwFree> real;
  std::unique_ptr<fftw_complex[], FftwFree> coeffs; // periodic only
  PlanHandle forward;
  PlanHandle backward;
  std::vector<double> spectral_k2;
  std::vector<double> discrete_k2;
  // Per-axis wavenumber of each mode, periodic only; 0 at Nyquist.
  std::array<std::vector<double>, 2> derivative_k;
  double normalisation = 1.0;

  explicit Impl(const Grid& g) : grid(g), periodic(g.boundary() == Boundary::periodic) {
    const int dims = g.dims();
    const std::size_t n0 = g.points(0);
    const std::size_t n1 = dims == 2 ? g.points(1) : 1;
    const double h = g.spacing();

    real.reset(static_cast<double*>(fftw_malloc(sizeof(double) * g.size())));
    if (periodic) {
      const std::size_t last = dims == 1 ? n0 / 2 + 1 : n1 / 2 + 1;
      modes = dims == 1 ? last : n0 * last;
      coeffs.reset(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * modes)));
      normalisation = 1.0 / static_cast<double>(g.size());
      {
        std::lock_guard lock(planner_mutex());
        if (dims == 1) {
          forward.reset(fftw_plan_dft_r2c_1d(static_cast<int>(n0), real.get(), coeffs.get(),
                                             FFTW_ESTIMATE));
          backward.reset(fftw_plan_dft_c2r_1d(static_cast<int>(n0), coeffs.get(), real.get(),
                                              FFTW_ESTIMATE));
        } else {
          forward.reset(fftw_plan_dft_r2c_2d(static_cast<int>(n0), static_cast<int>(n1),
                                             real.get(), coeffs.get(), FFTW_ESTIMATE));
          backward.reset(fftw_plan_dft_c2r_2d(static_cast<int>(n0), static_cast<int>(n1),
                                              coeffs.get(), real.get(), FFTW_ESTIMATE));
        }
      }
      spectral_k2.assign(modes, 0.0);
      discrete_k2.assign(modes, 0.0);
      for (int axis = 0; axis < dims; ++axis)
        derivative_k[axis].assign(modes, 0.0);
      for (std::size_t m = 0; m < modes; ++m) {
        std::array<std::size_t, 2> idx{};
        std::array<std::size_t, 2> len{n0, n1};
        if (dims == 1) {
          idx = {m, 0};
        } else {
          idx = {m / last, m % last};
        }
        for (int axis = 0; axis < dims; ++axis) {
          const double freq = signed_frequency(idx[axis], len[axis]);
          const double k = 2.0 * std::numbers::pi * freq / g.extent(axis);
          const double s = std::sin(0.5 * k * h);
          spectral_k2[m] += k * k;
          discrete_k2[m] += 4.0 / (h * h) * s * s;
          derivative_k[axis][m] = (2 * idx[axis] == len[axis]) ? 0.0 : k;
        }
      }
    } else {
      modes = g.size();
      normalisation = 1.0;
      for (int axis = 0; axis < dims; ++axis)
        normalisation /= 2.0 * static_cast<double>(g.points(axis));
      {
        std::lock_guard lock(planner_mutex());
        if (dims == 1) {
          forward.reset(fftw_plan_r2r_1d(static_cast<int>(n0), real.get(), real.get(),
                                         FFTW_REDFT10, FFTW_ESTIMATE));
          backward.reset(fftw_plan_r2r_1d(static_cast<int>(n0), real.get(), real.get(),
                                          FFTW_REDFT01, FFTW_ESTIMATE));
        } else {
          forward.reset(fftw_plan_r2r_2d(static_cast<int>(n0), static_cast<int>(n1),
                                         real.get(), real.get(), FFTW_REDFT10, FFTW_REDFT10,
                                         FFTW_ESTIMATE));
          backward.reset(fftw_plan_r2r_2d(static_cast<int>(n0), static_cast<int>(n1),
                                          real.get(), real.get(), FFTW_REDFT01,
                                          FFTW_REDFT01, FFTW_ESTIMATE));
        }
      }
      spectral_k2.assign(modes, 0.0);
      discrete_k2.assign(modes, 0.0);
      for (std::size_t m = 0; m < modes; ++m) {
        const auto idx = g.unravel(m);
        for (int axis = 0; axis < dims; ++axis) {
          const double n = static_cast<double>(g.points(axis));
          const double k = std::numbers::pi * static_cast<double>(idx[axis]) / g.extent(axis);
          const double s = std::sin(0.5 * std::numbers::pi * static_cast<double>(idx[axis]) / n);
          spectral_k2[m] += k * k;
          discrete_k2[m] += 4.0 / (h * h) * s * s;
        }
      }
    }
    if (!forward || !backward)
      throw Error("FFTW failed to create a plan");
  }

  void load(std::span<const double> in) {
    if (in.size() != grid.size())
      throw InvalidArgument("transform input size does not match grid");
    std::copy(in.begin(), in.end(), real.get());
  }

  void store(std::span<double> out) {
    if (out.size() != grid.size())
      throw InvalidArgument("transform output size does not match grid");
    for (std::size_t k = 0; k < grid.size(); ++k)
      out[k] = real[k] * normalisation;
  }
};

SpectralWorkspace::SpectralWorkspace(const Grid& grid)
    : impl_(std::make_unique<Impl>(grid)) {}
SpectralWorkspace::~SpectralWorkspace() = default;
SpectralWorkspace::SpectralWorkspace(SpectralWorkspace&&) noexcept = default;
SpectralWorkspace& SpectralWorkspace::operator=(SpectralWorkspace&&) noexcept = default;

const Grid& SpectralWorkspace::grid() const { return impl_->grid; }
std::size_t SpectralWorkspace::mode_count() const { return impl_->modes; }
const std::vector<double>& SpectralWorkspace::spectral_k2() const { return impl_->spectral_k2; }
const std::vector<double>& SpectralWorkspace::discrete_k2() const { return impl_->discrete_k2; }

void SpectralWorkspace::filter(std::span<const double> in,
                               std::span<const double> multiplier,
                               std::span<double> out) {
  Impl& w = *impl_;
  if (multiplier.size() != w.modes)
    throw InvalidArgument("multiplier length does not match mode count");
  w.load(in);
  fftw_execute(w.forward.get());
  if (w.periodic) {
    for (std::size_t m = 0; m < w.modes; ++m) {
      w.coeffs[m][0] *= multiplier[m];
      w.coeffs[m][1] *= multiplier[m];
    }
  } else {
    for (std::size_t m = 0; m < w.modes; ++m)
      w.real[m] *= multiplier[m];
  }
  fftw_execute(w.backward.get());
  w.store(out);
}

void SpectralWorkspace::derivative(int axis, std::span<const double> in,
                                   std::span<double> out) {
  Impl& w = *impl_;
  if (!w.periodic)
    throw InvalidArgument("spectral derivative requires a periodic grid");
  if (axis < 0 || axis >= w.grid.dims())
    throw InvalidArgument("derivative axis out of range");
  w.load(in);
  fftw_execute(w.forward.get());
  const auto& k = w.derivative_k[axis];
  for (std::size_t m = 0; m < w.modes; ++m) {
    // (re + i im) * i k = -k im + i k re
    const double re = w.coeffs[m][0];
    const double im = w.coeffs[m][1];
    w.coeffs[m][0] = -k[m] * im;
    w.coeffs[m][1] = k[m] * re;
  }
  fftw_execute(w.backward.get());
  w.store(out);
}

} // namespace chemolab
