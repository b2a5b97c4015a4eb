#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include "sgf/error.hpp"
#include "sgf/spectral/field.hpp"
#include "sgf/spectral/grid.hpp"

namespace sgf {

/// Trapezoid in x times Clenshaw-Curtis in y over nodal data.
inline double nodal_integral(const ChannelGrid& grid, std::span<const double> values,
                             std::span<const double> y_weights) {
  if (values.size() != grid.nodal_size()) throw DimensionMismatch("nodal data size");
  const int ny1 = grid.ny() + 1;
  double s = 0.0;
  for (int i = 0; i < grid.nx(); ++i) {
    const double* row = values.data() + std::size_t(i) * ny1;
    for (int j = 0; j < ny1; ++j) s += y_weights[j] * row[j];
  }
  return s * grid.dx();
}

inline double nodal_integral(const ChannelGrid& grid, std::span<const double> values) {
  return nodal_integral(grid, values, grid.quad_weights());
}

inline double inner_product(const SpectralScalarField& f, const SpectralScalarField& g) {
  require_same_grid(f.grid(), g.grid());
  const auto a = transform_inverse(f);
  const auto b = transform_inverse(g);
  std::vector<double> p(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) p[i] = a[i] * b[i];
  return nodal_integral(f.grid(), p);
}

/// y-weights restricted to the wall strips {1 - delta < |y| <= 1}.
///
/// Node j owns the panel [1 - W_{j+1}, 1 - W_j] with W_j the running sum of
/// the Clenshaw-Curtis weights, so panels tile [-1, 1] and each has length
/// w_j. A panel cut by the strip edge keeps the overlapping length.
inline std::vector<double> strip_weights(const ChannelGrid& grid, double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) throw InvalidArgument("strip width must lie in (0, 1]");
  const auto w = grid.quad_weights();
  const int ny1 = grid.ny() + 1;
  std::vector<double> out(ny1, 0.0);
  double upper = 1.0;
  for (int j = 0; j < ny1; ++j) {
    const double lower = (j == ny1 - 1) ? -1.0 : upper - w[j];
    // top strip (1 - delta, 1] and bottom strip [-1, -1 + delta)
    const double top = std::max(0.0, upper - std::max(lower, 1.0 - delta));
    const double bottom = std::max(0.0, std::min(upper, -1.0 + delta) - lower);
    out[j] = std::min(w[j], top + bottom);
    upper = lower;
  }
  return out;
}

/// Complement of strip_weights within the full weights.
inline std::vector<double> interior_weights(const ChannelGrid& grid, double delta) {
  auto s = strip_weights(grid, delta);
  const auto w = grid.quad_weights();
  for (std::size_t j = 0; j < s.size(); ++j) s[j] = std::max(0.0, w[j] - s[j]);
  return s;
}

}  // namespace sgf
