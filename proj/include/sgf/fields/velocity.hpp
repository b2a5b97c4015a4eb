#pragma once

#include <optional>

#include "sgf/spectral/field.hpp"
#include "sgf/spectral/quadrature.hpp"

namespace sgf {

struct VelocityField {
  SpectralScalarField u1;
  SpectralScalarField u2;
  std::optional<SpectralScalarField> source_stream;

  explicit VelocityField(const ChannelGrid& g) : u1(g), u2(g) {}
  VelocityField(SpectralScalarField a, SpectralScalarField b) : u1(std::move(a)), u2(std::move(b)) {
    require_same_grid(u1.grid(), u2.grid());
  }

  const ChannelGrid& grid() const noexcept { return u1.grid(); }

  VelocityField& operator-=(const VelocityField& o) {
    u1 -= o.u1;
    u2 -= o.u2;
    source_stream.reset();
    return *this;
  }
  friend VelocityField operator-(VelocityField a, const VelocityField& b) { return a -= b; }
};

/// u = grad-perp psi = (-d_y psi, d_x psi).
inline VelocityField velocity_from_stream(const SpectralScalarField& psi) {
  auto u1 = diff_y(psi);
  u1 *= -1.0;
  VelocityField u(std::move(u1), diff_x(psi));
  u.source_stream = psi;
  return u;
}

inline SpectralScalarField curl_of(const VelocityField& u) { return diff_x(u.u2) - diff_y(u.u1); }

inline SpectralScalarField divergence_of(const VelocityField& u) { return diff_x(u.u1) + diff_y(u.u2); }

/// q = omega - alpha^2 Lap omega.
inline SpectralScalarField q_from_u(const VelocityField& u, double alpha) {
  if (!(alpha >= 0.0)) throw InvalidArgument("alpha must be ≥ 0");
  auto w = curl_of(u);
  if (alpha == 0.0) return w;
  return w.axpy(-alpha * alpha, laplacian(w));
}

/// Largest nodal |u_i| at the two wall rows.
inline double wall_speed(const VelocityField& u) {
  const auto a = wall_trace(u.u1);
  const auto b = wall_trace(u.u2);
  return std::max({max_abs(a.top), max_abs(a.bottom), max_abs(b.top), max_abs(b.bottom)});
}

}  // namespace sgf
