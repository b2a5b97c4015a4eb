#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "sgf/fields/velocity.hpp"
#include "sgf/spectral/quadrature.hpp"

namespace sgf {

struct NormReport {
  double l2 = 0.0;
  double h1_semi = 0.0;
  double h1 = 0.0;
  double h2 = 0.0;
  double h3 = 0.0;
};

inline double norm_sq(const SpectralScalarField& f) {
  const auto v = transform_inverse(f);
  std::vector<double> p(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) p[i] = v[i] * v[i];
  return nodal_integral(f.grid(), p);
}

namespace detail {

// Squared L2 norms of all derivatives of f, grouped by order 0..max_order.
inline std::array<double, 4> derivative_energy(const SpectralScalarField& f, int max_order) {
  std::array<double, 4> e{};
  std::vector<SpectralScalarField> level{f};
  e[0] = norm_sq(f);
  for (int order = 1; order <= max_order; ++order) {
    // multi-indices (order - j, j): x-derivatives of the first entry, then
    // one more y-derivative of every entry.
    std::vector<SpectralScalarField> next;
    next.push_back(diff_x(level.front()));
    for (const auto& g : level) next.push_back(diff_y(g));
    for (const auto& g : next) e[order] += norm_sq(g);
    level = std::move(next);
  }
  return e;
}

inline NormReport assemble(const std::array<double, 4>& e) {
  NormReport r;
  r.l2 = std::sqrt(e[0]);
  r.h1_semi = std::sqrt(e[1]);
  r.h1 = std::sqrt(e[0] + e[1]);
  r.h2 = std::sqrt(e[0] + e[1] + e[2]);
  r.h3 = std::sqrt(e[0] + e[1] + e[2] + e[3]);
  return r;
}

}  // namespace detail

/// Full Sobolev norms up to order 3.
inline NormReport norms_of(const VelocityField& u) {
  const auto a = detail::derivative_energy(u.u1, 3);
  const auto b = detail::derivative_energy(u.u2, 3);
  std::array<double, 4> e{};
  for (int i = 0; i < 4; ++i) e[i] = a[i] + b[i];
  return detail::assemble(e);
}

inline NormReport norms_of(const SpectralScalarField& f) { return detail::assemble(detail::derivative_energy(f, 3)); }

/// ||grad u||^2 = sum of squared first derivatives of both components.
inline double grad_sq(const VelocityField& u) {
  return norm_sq(diff_x(u.u1)) + norm_sq(diff_y(u.u1)) + norm_sq(diff_x(u.u2)) + norm_sq(diff_y(u.u2));
}

/// Nodal |grad u|^2.
inline std::vector<double> grad_density(const VelocityField& u) {
  std::vector<double> acc(u.grid().nodal_size(), 0.0);
  for (const auto& d : {diff_x(u.u1), diff_y(u.u1), diff_x(u.u2), diff_y(u.u2)}) {
    const auto v = transform_inverse(d);
    for (std::size_t i = 0; i < v.size(); ++i) acc[i] += v[i] * v[i];
  }
  return acc;
}

/// Both wall strips {1 - delta < |y| < 1}.
struct StripSpec {
  double delta = 0.1;

  explicit StripSpec(double d) : delta(d) {
    if (!(d > 0.0 && d <= 1.0)) throw InvalidArgument("strip width must lie in (0, 1]");
  }
};

inline double weighted_sum_sq(const std::vector<const SpectralScalarField*>& parts, std::span<const double> yw) {
  const auto& g = parts.front()->grid();
  std::vector<double> acc(g.nodal_size(), 0.0);
  for (const auto* p : parts) {
    const auto v = transform_inverse(*p);
    for (std::size_t i = 0; i < v.size(); ++i) acc[i] += v[i] * v[i];
  }
  return nodal_integral(g, acc, yw);
}

inline double strip_norm_sq(const SpectralScalarField& f, const StripSpec& s) {
  return weighted_sum_sq({&f}, strip_weights(f.grid(), s.delta));
}

inline double strip_norm_sq(const VelocityField& u, const StripSpec& s) {
  return weighted_sum_sq({&u.u1, &u.u2}, strip_weights(u.grid(), s.delta));
}

inline double strip_grad_norm_sq(const VelocityField& u, const StripSpec& s) {
  const auto a = diff_x(u.u1), b = diff_y(u.u1), c = diff_x(u.u2), d = diff_y(u.u2);
  return weighted_sum_sq({&a, &b, &c, &d}, strip_weights(u.grid(), s.delta));
}

/// ||u||^2 over the region outside the strips.
inline double interior_norm_sq(const VelocityField& u, const StripSpec& s) {
  return weighted_sum_sq({&u.u1, &u.u2}, interior_weights(u.grid(), s.delta));
}

/// ||f||_{L^4}^2 evaluated on a grid refined twice in each direction.
inline double l4_norm_sq(const SpectralScalarField& f) {
  const auto& g = f.grid();
  const ChannelGrid fine(2 * g.nx(), 2 * g.ny(), g.lx());
  const auto v = transform_inverse(resample(f, fine));
  std::vector<double> p(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) p[i] = v[i] * v[i] * v[i] * v[i];
  return std::sqrt(nodal_integral(fine, p));
}

}  // namespace sgf
