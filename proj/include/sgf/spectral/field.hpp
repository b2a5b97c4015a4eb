#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "sgf/error.hpp"
#include "sgf/spectral/chebyshev.hpp"
#include "sgf/spectral/grid.hpp"

namespace sgf {

/// A real scalar field on the channel stored as Fourier(x) x Chebyshev(y)
/// coefficients. Only k = 0..nx/2 are stored; negative modes are the complex
/// conjugates, so the represented field is real by construction.
class SpectralScalarField {
 public:
  explicit SpectralScalarField(ChannelGrid grid) : grid_(std::move(grid)), c_(grid_.spectral_size()) {}

  const ChannelGrid& grid() const noexcept { return grid_; }
  int stride() const noexcept { return grid_.ny() + 1; }

  Complex& operator()(int k, int m) noexcept { return c_[std::size_t(k) * stride() + m]; }
  const Complex& operator()(int k, int m) const noexcept { return c_[std::size_t(k) * stride() + m]; }

  std::span<Complex> mode(int k) noexcept { return {c_.data() + std::size_t(k) * stride(), std::size_t(stride())}; }
  std::span<const Complex> mode(int k) const noexcept {
    return {c_.data() + std::size_t(k) * stride(), std::size_t(stride())};
  }
  std::span<Complex> coeffs() noexcept { return c_; }
  std::span<const Complex> coeffs() const noexcept { return c_; }

  /// Real parts of the k = 0 column: the x-mean profile in Chebyshev form.
  std::vector<double> mean_profile() const {
    std::vector<double> p(stride());
    for (int m = 0; m < stride(); ++m) p[m] = c_[m].real();
    return p;
  }
  void set_mean_profile(std::span<const double> p) {
    if (static_cast<int>(p.size()) != stride()) throw DimensionMismatch("mean profile length");
    for (int m = 0; m < stride(); ++m) c_[m] = Complex(p[m], 0.0);
  }

  bool all_finite() const noexcept {
    return std::all_of(c_.begin(), c_.end(),
                       [](const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
  }

  double max_abs_coeff() const noexcept {
    double m = 0.0;
    for (const auto& z : c_) m = std::max(m, std::abs(z));
    return m;
  }

  SpectralScalarField& operator+=(const SpectralScalarField& o) {
    require_same_grid(grid_, o.grid_);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  SpectralScalarField& operator-=(const SpectralScalarField& o) {
    require_same_grid(grid_, o.grid_);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  SpectralScalarField& operator*=(double s) noexcept {
    for (auto& z : c_) z *= s;
    return *this;
  }
  /// this += s * o
  SpectralScalarField& axpy(double s, const SpectralScalarField& o) {
    require_same_grid(grid_, o.grid_);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += s * o.c_[i];
    return *this;
  }

  friend SpectralScalarField operator+(SpectralScalarField a, const SpectralScalarField& b) { return a += b; }
  friend SpectralScalarField operator-(SpectralScalarField a, const SpectralScalarField& b) { return a -= b; }
  friend SpectralScalarField operator*(double s, SpectralScalarField a) { return a *= s; }
  friend SpectralScalarField operator*(SpectralScalarField a, double s) { return a *= s; }

 private:
  ChannelGrid grid_;
  std::vector<Complex> c_;
};

inline SpectralScalarField transform_forward(const ChannelGrid& grid, std::span<const double> values) {
  if (values.size() != grid.nodal_size()) {
    throw DimensionMismatch("nodal data must have nx*(ny+1) entries");
  }
  SpectralScalarField f(grid);
  grid.plans().forward(values, f.coeffs());
  return f;
}

inline std::vector<double> transform_inverse(const SpectralScalarField& f) {
  std::vector<double> v(f.grid().nodal_size());
  f.grid().plans().inverse(f.coeffs(), v);
  return v;
}

/// Samples fn(x, y) at the grid nodes and transforms.
inline SpectralScalarField field_from_function(const ChannelGrid& grid,
                                               const std::function<double(double, double)>& fn) {
  std::vector<double> v(grid.nodal_size());
  const auto x = grid.x_nodes();
  const auto y = grid.y_nodes();
  const int ny1 = grid.ny() + 1;
  for (int i = 0; i < grid.nx(); ++i)
    for (int j = 0; j < ny1; ++j) v[std::size_t(i) * ny1 + j] = fn(x[i], y[j]);
  return transform_forward(grid, v);
}

/// x-independent field from a Chebyshev profile.
inline SpectralScalarField field_from_profile(const ChannelGrid& grid, std::span<const double> profile) {
  SpectralScalarField f(grid);
  f.set_mean_profile(profile);
  return f;
}

inline SpectralScalarField diff_x(const SpectralScalarField& f) {
  const auto& g = f.grid();
  SpectralScalarField out(g);
  for (int k = 0; k < g.modes(); ++k) {
    if (k == g.nyquist()) continue;  // the Nyquist mode has no real derivative
    const Complex ik(0.0, g.wavenumber(k));
    auto src = f.mode(k);
    auto dst = out.mode(k);
    for (std::size_t m = 0; m < src.size(); ++m) dst[m] = ik * src[m];
  }
  return out;
}

inline SpectralScalarField diff_y(const SpectralScalarField& f) {
  const auto& g = f.grid();
  SpectralScalarField out(g);
  for (int k = 0; k < g.modes(); ++k) {
    const auto d = cheb::derivative(f.mode(k));
    std::copy(d.begin(), d.end(), out.mode(k).begin());
  }
  return out;
}

inline SpectralScalarField laplacian(const SpectralScalarField& f) {
  const auto& g = f.grid();
  SpectralScalarField out(g);
  for (int k = 0; k < g.modes(); ++k) {
    const auto d1 = cheb::derivative(f.mode(k));
    const auto d2 = cheb::derivative(std::span<const Complex>(d1));
    const double kk = (k == g.nyquist()) ? 0.0 : g.wavenumber(k) * g.wavenumber(k);
    auto src = f.mode(k);
    auto dst = out.mode(k);
    for (std::size_t m = 0; m < src.size(); ++m) dst[m] = d2[m] - kk * src[m];
    if (k == g.nyquist()) std::fill(dst.begin(), dst.end(), Complex{});
  }
  return out;
}

/// Copies coefficients onto another grid with the same lx: zero-pads or
/// truncates in both directions. The Nyquist column is dropped.
inline SpectralScalarField resample(const SpectralScalarField& f, const ChannelGrid& target) {
  if (f.grid().lx() != target.lx()) throw GridMismatch("resample requires equal lx");
  SpectralScalarField out(target);
  const int kmax = std::min(f.grid().nyquist(), target.nyquist());
  const int mmax = std::min(f.grid().ny(), target.ny());
  for (int k = 0; k < kmax; ++k)
    for (int m = 0; m <= mmax; ++m) out(k, m) = f(k, m);
  return out;
}

/// Nodal values of a field at the wall rows y = +1 (j = 0) and y = -1 (j = ny).
struct WallTrace {
  std::vector<double> top, bottom;
};

inline WallTrace wall_trace(const SpectralScalarField& f) {
  const auto v = transform_inverse(f);
  const int ny1 = f.grid().ny() + 1;
  WallTrace w;
  for (int i = 0; i < f.grid().nx(); ++i) {
    w.top.push_back(v[std::size_t(i) * ny1]);
    w.bottom.push_back(v[std::size_t(i) * ny1 + ny1 - 1]);
  }
  return w;
}

inline double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace sgf
