#pragma once

#include <vector>

#include "sgf/fields/velocity.hpp"

namespace sgf {

/// Quadratic products evaluated on a 3/2-padded grid and truncated back.
class Dealiaser {
 public:
  explicit Dealiaser(const ChannelGrid& g) : base_(g), padded_(padded_nx(g.nx()), 3 * g.ny() / 2 + 1, g.lx()) {}

  const ChannelGrid& base() const noexcept { return base_; }
  const ChannelGrid& padded() const noexcept { return padded_; }

  std::vector<double> to_padded_nodes(const SpectralScalarField& f) const {
    return transform_inverse(resample(f, padded_));
  }

  SpectralScalarField from_padded_nodes(std::span<const double> v) const {
    return resample(transform_forward(padded_, v), base_);
  }

  SpectralScalarField product(const SpectralScalarField& a, const SpectralScalarField& b) const {
    const auto va = to_padded_nodes(a);
    const auto vb = to_padded_nodes(b);
    std::vector<double> p(va.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = va[i] * vb[i];
    return from_padded_nodes(p);
  }

  struct Advection {
    SpectralScalarField term;           // u . grad q
    std::vector<double> mean_flux;      // x-mean of u2 q, Chebyshev coefficients
  };

  Advection advect(const VelocityField& u, const SpectralScalarField& q) const {
    require_same_grid(u.grid(), base_);
    require_same_grid(q.grid(), base_);
    const auto u1 = to_padded_nodes(u.u1);
    const auto u2 = to_padded_nodes(u.u2);
    const auto qx = to_padded_nodes(diff_x(q));
    const auto qy = to_padded_nodes(diff_y(q));
    const auto qv = to_padded_nodes(q);
    std::vector<double> adv(u1.size()), flux(u1.size());
    for (std::size_t i = 0; i < adv.size(); ++i) {
      adv[i] = u1[i] * qx[i] + u2[i] * qy[i];
      flux[i] = u2[i] * qv[i];
    }
    return {from_padded_nodes(adv), from_padded_nodes(flux).mean_profile()};
  }

 private:
  static int padded_nx(int nx) {
    const int p = (3 * nx + 1) / 2;
    return p % 2 == 0 ? p : p + 1;
  }

  ChannelGrid base_;
  ChannelGrid padded_;
};

inline SpectralScalarField advection_term(const VelocityField& u, const SpectralScalarField& q) {
  return Dealiaser(u.grid()).advect(u, q).term;
}

}  // namespace sgf
