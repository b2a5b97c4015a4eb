#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "sgf/fields/norms.hpp"
#include "sgf/util/fit.hpp"

namespace sgf {

/// Smooth step eta(s): 1 for s <= 0, 0 for s >= 1, eta = 1 - P(s) between.
enum class CutoffProfile { C2, C4 };

namespace detail {

inline const std::vector<double>& cutoff_poly(CutoffProfile p) {
  // coefficients of P in powers of s
  static const std::vector<double> c2 = {0, 0, 0, 10, -15, 6};
  static const std::vector<double> c4 = {0, 0, 0, 0, 0, 126, -420, 540, -315, 70};
  return p == CutoffProfile::C2 ? c2 : c4;
}

}  // namespace detail

/// d^order eta / ds^order, order 0..3.
inline double cutoff_eval(CutoffProfile p, double s, int order = 0) {
  if (s <= 0.0) return order == 0 ? 1.0 : 0.0;
  if (s >= 1.0) return 0.0;
  const auto& c = detail::cutoff_poly(p);
  double v = 0.0;
  for (std::size_t n = static_cast<std::size_t>(order); n < c.size(); ++n) {
    double f = 1.0;
    for (int i = 0; i < order; ++i) f *= static_cast<double>(n - i);
    v += c[n] * f * std::pow(s, static_cast<double>(n) - order);
  }
  return order == 0 ? 1.0 - v : -v;
}

struct CorrectorSpec {
  double delta = 0.1;
  CutoffProfile profile = CutoffProfile::C2;

  CorrectorSpec(double d, CutoffProfile p = CutoffProfile::C2) : delta(d), profile(p) {
    if (!(d > 0.0 && d < 1.0)) throw InvalidArgument("corrector width must lie in (0, 1)");
  }
};

/// z(y) = eta((1 - |y|) / delta) and its y-derivatives at one point.
inline std::array<double, 4> wall_cutoff(const CorrectorSpec& spec, double y) {
  const double s = (1.0 - std::abs(y)) / spec.delta;
  const double sg = y >= 0.0 ? 1.0 : -1.0;
  std::array<double, 4> z{};
  double scale = 1.0;
  for (int o = 0; o < 4; ++o) {
    // ds/dy = -sign(y) / delta
    z[o] = cutoff_eval(spec.profile, s, o) * scale;
    scale *= -sg / spec.delta;
  }
  return z;
}

/// Number of Gauss-Lobatto nodes strictly inside one wall strip.
inline int nodes_in_strip(int ny, double delta) {
  int n = 0;
  for (double y : cheb::nodes(ny))
    if (1.0 - y < delta) ++n;
  return n;
}

inline int nodes_in_strip(const ChannelGrid& g, double delta) { return nodes_in_strip(g.ny(), delta); }

namespace detail {

struct StreamNodes {
  std::vector<double> p, px, py, pxx, pxy, pyy;
};

inline StreamNodes stream_nodes(const SpectralScalarField& psi) {
  const auto dx = diff_x(psi);
  const auto dy = diff_y(psi);
  return {transform_inverse(psi),         transform_inverse(dx),         transform_inverse(dy),
          transform_inverse(diff_x(dx)), transform_inverse(diff_y(dx)), transform_inverse(diff_y(dy))};
}

inline void require_wall_zero(const SpectralScalarField& psi) {
  const auto w = wall_trace(psi);
  const double scale = std::max(1.0, psi.max_abs_coeff());
  if (std::max(max_abs(w.top), max_abs(w.bottom)) > 1e-10 * scale)
    throw InvalidArgument("stream function must vanish at the walls");
}

}  // namespace detail

/// u_b = grad-perp(z psi), evaluated nodally with analytic derivatives of z.
inline VelocityField build_corrector(const SpectralScalarField& euler_stream, const CorrectorSpec& spec) {
  detail::require_wall_zero(euler_stream);
  const auto& g = euler_stream.grid();
  const auto s = detail::stream_nodes(euler_stream);
  const auto y = g.y_nodes();
  const int ny1 = g.ny() + 1;
  std::vector<double> u1(g.nodal_size()), u2(g.nodal_size());
  for (int j = 0; j < ny1; ++j) {
    const auto z = wall_cutoff(spec, y[j]);
    for (int i = 0; i < g.nx(); ++i) {
      const std::size_t p = std::size_t(i) * ny1 + j;
      u1[p] = -(z[1] * s.p[p] + z[0] * s.py[p]);
      u2[p] = z[0] * s.px[p];
    }
  }
  VelocityField u(transform_forward(g, u1), transform_forward(g, u2));
  return u;
}

struct CorrectorNorms {
  double l2 = 0.0;    // ||u_b||
  double grad = 0.0;  // ||grad u_b||
  /// max nodal |u_b| at nodes outside the strip (exactly zero by construction)
  double outside_max = 0.0;
};

/// Norms of u_b by nodal quadrature of the analytic expressions.
inline CorrectorNorms corrector_norms(const SpectralScalarField& euler_stream, const CorrectorSpec& spec) {
  detail::require_wall_zero(euler_stream);
  const auto& g = euler_stream.grid();
  const auto s = detail::stream_nodes(euler_stream);
  const auto y = g.y_nodes();
  const int ny1 = g.ny() + 1;
  std::vector<double> e0(g.nodal_size()), e1(g.nodal_size());
  CorrectorNorms out;
  for (int j = 0; j < ny1; ++j) {
    const auto z = wall_cutoff(spec, y[j]);
    const bool inside = 1.0 - std::abs(y[j]) < spec.delta;
    for (int i = 0; i < g.nx(); ++i) {
      const std::size_t p = std::size_t(i) * ny1 + j;
      const double a1 = -(z[1] * s.p[p] + z[0] * s.py[p]);
      const double a2 = z[0] * s.px[p];
      const double a1x = -(z[1] * s.px[p] + z[0] * s.pxy[p]);
      const double a1y = -(z[2] * s.p[p] + 2.0 * z[1] * s.py[p] + z[0] * s.pyy[p]);
      const double a2x = z[0] * s.pxx[p];
      const double a2y = z[1] * s.px[p] + z[0] * s.pxy[p];
      e0[p] = a1 * a1 + a2 * a2;
      e1[p] = a1x * a1x + a1y * a1y + a2x * a2x + a2y * a2y;
      if (!inside) out.outside_max = std::max({out.outside_max, std::abs(a1), std::abs(a2)});
    }
  }
  out.l2 = std::sqrt(nodal_integral(g, e0));
  out.grad = std::sqrt(nodal_integral(g, e1));
  return out;
}

struct CorrectorFit {
  double p0 = 0.0;  // slope of log ||u_b|| vs log delta
  double p1 = 0.0;  // slope of log ||grad u_b|| vs log delta
  std::vector<double> deltas;
  std::vector<CorrectorNorms> norms;
};

inline CorrectorFit corrector_scaling_fit(const SpectralScalarField& euler_stream, const std::vector<double>& deltas,
                                          CutoffProfile profile = CutoffProfile::C2) {
  if (deltas.size() < 4) throw InvalidArgument("scaling fit needs at least four widths");
  for (std::size_t i = 1; i < deltas.size(); ++i)
    if (!(deltas[i] < deltas[i - 1])) throw InvalidArgument("widths must be strictly decreasing");
  if (std::log10(deltas.front() / deltas.back()) < 0.9) throw InvalidArgument("widths must span about a decade");
  CorrectorFit f;
  f.deltas = deltas;
  std::vector<double> a, b;
  const auto ubar = velocity_from_stream(euler_stream);
  const double floor = 1e-6 * std::sqrt(norm_sq(ubar.u1) + norm_sq(ubar.u2));
  for (double d : deltas) {
    if (nodes_in_strip(euler_stream.grid(), d) < 8)
      throw Unresolved("strip of width " + std::to_string(d) + " holds fewer than 8 nodes");
    const auto n = corrector_norms(euler_stream, CorrectorSpec(d, profile));
    if (!(n.l2 > floor) || !(n.grad > floor))
      throw InvalidArgument("corrector vanishes at width " + std::to_string(d) + "; nothing to fit");
    f.norms.push_back(n);
    a.push_back(n.l2);
    b.push_back(n.grad);
  }
  f.p0 = log_log_fit(deltas, a).slope;
  f.p1 = log_log_fit(deltas, b).slope;
  return f;
}

}  // namespace sgf
