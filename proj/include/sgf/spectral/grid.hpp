#pragma once

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <vector>

#include "sgf/error.hpp"
#include "sgf/spectral/chebyshev.hpp"

namespace sgf {

using Complex = std::complex<double>;

namespace detail {

// FFTW's planner is not reentrant.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

/// Plans for one (nx, ny) pair. Plans are created with FFTW_ESTIMATE so the
/// arithmetic is identical from run to run, and FFTW_UNALIGNED so they apply
/// to any std::vector buffer through the new-array execute functions.
class TransformPlans {
 public:
  TransformPlans(int nx, int ny) : nx_(nx), ny_(ny) {
    const int modes = nx / 2 + 1;
    std::vector<double> real(static_cast<std::size_t>(nx) * (ny + 1));
    std::vector<Complex> spec(static_cast<std::size_t>(modes) * (ny + 1));
    auto* cspec = reinterpret_cast<fftw_complex*>(spec.data());
    const int n_x[] = {nx};
    const int n_y[] = {ny + 1};
    const fftw_r2r_kind kind[] = {FFTW_REDFT00};
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    std::lock_guard lock(fftw_planner_mutex());
    // x transforms: one per y node, strided by ny+1.
    r2c_ = fftw_plan_many_dft_r2c(1, n_x, ny + 1, real.data(), nullptr, ny + 1, 1, cspec, nullptr, ny + 1,
                                  1, flags);
    c2r_ = fftw_plan_many_dft_c2r(1, n_x, ny + 1, cspec, nullptr, ny + 1, 1, real.data(), nullptr, ny + 1,
                                  1, flags);
    // y transforms on the real (or imaginary) parts of the interleaved
    // spectrum: stride 2, one sequence per mode.
    auto* dspec = reinterpret_cast<double*>(spec.data());
    dct_ = fftw_plan_many_r2r(1, n_y, modes, dspec, nullptr, 2, 2 * (ny + 1), dspec, nullptr, 2,
                              2 * (ny + 1), kind, flags);
    if (!r2c_ || !c2r_ || !dct_) throw Error("FFTW failed to create a plan");
  }

  TransformPlans(const TransformPlans&) = delete;
  TransformPlans& operator=(const TransformPlans&) = delete;

  ~TransformPlans() {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(r2c_);
    fftw_destroy_plan(c2r_);
    fftw_destroy_plan(dct_);
  }

  /// Nodal values (x-major, nx * (ny+1)) to coefficients (mode-major).
  void forward(std::span<const double> values, std::span<Complex> coeffs) const {
    std::vector<double> in(values.begin(), values.end());
    auto* out = reinterpret_cast<fftw_complex*>(coeffs.data());
    fftw_execute_dft_r2c(r2c_, in.data(), out);
    const int modes = nx_ / 2 + 1;
    const double inv_nx = 1.0 / nx_;
    auto* d = reinterpret_cast<double*>(coeffs.data());
    fftw_execute_r2r(dct_, d, d);
    fftw_execute_r2r(dct_, d + 1, d + 1);
    for (int k = 0; k < modes; ++k) {
      for (int m = 0; m <= ny_; ++m) {
        const double cm = (m == 0 || m == ny_) ? 2.0 : 1.0;
        coeffs[k * (ny_ + 1) + m] *= inv_nx / (ny_ * cm);
      }
    }
    // Hermitian: the k = 0 and Nyquist columns of real data are real.
    for (int m = 0; m <= ny_; ++m) {
      coeffs[m].imag(0.0);
      coeffs[(nx_ / 2) * (ny_ + 1) + m].imag(0.0);
    }
  }

  void inverse(std::span<const Complex> coeffs, std::span<double> values) const {
    const int modes = nx_ / 2 + 1;
    std::vector<Complex> work(coeffs.begin(), coeffs.end());
    for (int k = 0; k < modes; ++k) {
      for (int m = 1; m < ny_; ++m) work[k * (ny_ + 1) + m] *= 0.5;
    }
    auto* d = reinterpret_cast<double*>(work.data());
    fftw_execute_r2r(dct_, d, d);
    fftw_execute_r2r(dct_, d + 1, d + 1);
    fftw_execute_dft_c2r(c2r_, reinterpret_cast<fftw_complex*>(work.data()), values.data());
  }

 private:
  int nx_, ny_;
  fftw_plan r2c_ = nullptr;
  fftw_plan c2r_ = nullptr;
  fftw_plan dct_ = nullptr;
};

}  // namespace detail

/// Periodic channel [0, lx) x [-1, 1]: nx Fourier points in x, Chebyshev
/// degree ny in y on Gauss-Lobatto nodes. Cheap to copy; copies share plans.
class ChannelGrid {
 public:
  ChannelGrid(int nx, int ny, double lx = 2.0 * std::numbers::pi) {
    if (nx < 4 || nx % 2 != 0) throw InvalidArgument("nx must be even and >= 4");
    if (ny < 8) throw InvalidArgument("ny must be >= 8");
    if (!(lx > 0.0) || !std::isfinite(lx)) throw InvalidArgument("lx must be positive");
    auto d = std::make_shared<Data>();
    d->nx = nx;
    d->ny = ny;
    d->lx = lx;
    d->y = cheb::nodes(ny);
    d->w = cheb::cc_weights(ny);
    d->x.resize(nx);
    for (int i = 0; i < nx; ++i) d->x[i] = lx * i / nx;
    d->plans = std::make_unique<detail::TransformPlans>(nx, ny);
    data_ = std::move(d);
  }

  int nx() const noexcept { return data_->nx; }
  int ny() const noexcept { return data_->ny; }
  double lx() const noexcept { return data_->lx; }
  /// Number of stored Fourier modes, k = 0..nx/2.
  int modes() const noexcept { return data_->nx / 2 + 1; }
  int nyquist() const noexcept { return data_->nx / 2; }
  std::size_t nodal_size() const noexcept { return std::size_t(nx()) * (ny() + 1); }
  std::size_t spectral_size() const noexcept { return std::size_t(modes()) * (ny() + 1); }

  std::span<const double> y_nodes() const noexcept { return data_->y; }
  std::span<const double> x_nodes() const noexcept { return data_->x; }
  std::span<const double> quad_weights() const noexcept { return data_->w; }

  /// Physical wavenumber of stored mode k.
  double wavenumber(int k) const noexcept { return 2.0 * std::numbers::pi * k / data_->lx; }

  /// Smallest spacing between neighbouring y nodes, measured at node j.
  double dy_local(int j) const noexcept {
    const auto& y = data_->y;
    double d = 2.0;
    if (j > 0) d = std::min(d, y[j - 1] - y[j]);
    if (j < ny()) d = std::min(d, y[j] - y[j + 1]);
    return d;
  }
  double dx() const noexcept { return data_->lx / data_->nx; }

  const detail::TransformPlans& plans() const noexcept { return *data_->plans; }

  friend bool operator==(const ChannelGrid& a, const ChannelGrid& b) noexcept {
    return a.data_ == b.data_ ||
           (a.nx() == b.nx() && a.ny() == b.ny() && a.lx() == b.lx());
  }

 private:
  struct Data {
    int nx = 0, ny = 0;
    double lx = 0.0;
    std::vector<double> y, w, x;
    std::unique_ptr<detail::TransformPlans> plans;
  };
  std::shared_ptr<const Data> data_;
};

inline void require_same_grid(const ChannelGrid& a, const ChannelGrid& b) {
  if (!(a == b)) throw GridMismatch("fields live on different grids");
}

}  // namespace sgf
