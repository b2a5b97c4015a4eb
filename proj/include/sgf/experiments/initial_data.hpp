#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

#include "sgf/diagnostics/corrector.hpp"
#include "sgf/fields/norms.hpp"

namespace sgf {

enum class BaseFlow { Zero, Shear, PerturbedShear, SmoothNoSlip };

inline std::string_view to_string(BaseFlow b) {
  switch (b) {
    case BaseFlow::Zero: return "zero";
    case BaseFlow::Shear: return "shear";
    case BaseFlow::PerturbedShear: return "perturbed_shear";
    case BaseFlow::SmoothNoSlip: return "smooth_noslip";
  }
  return "?";
}

inline BaseFlow base_flow_from_string(std::string_view s) {
  if (s == "zero") return BaseFlow::Zero;
  if (s == "shear") return BaseFlow::Shear;
  if (s == "perturbed_shear") return BaseFlow::PerturbedShear;
  if (s == "smooth_noslip") return BaseFlow::SmoothNoSlip;
  throw InvalidArgument("unknown base flow '" + std::string(s) + "'");
}

/// Stream function of a base flow; all vanish at the walls.
///   shear           psi = sin(pi y) / pi, u = (-cos(pi y), 0), unit wall slip
///   perturbed_shear shear + eps cos(2 pi x / lx) (1 - y^2)
///   smooth_noslip   (1 - y^2)^2 times a few low modes
inline SpectralScalarField base_stream(const ChannelGrid& g, BaseFlow flow, double eps = 0.05) {
  const double pi = std::numbers::pi;
  const double kx = 2.0 * pi / g.lx();
  switch (flow) {
    case BaseFlow::Zero: return SpectralScalarField(g);
    case BaseFlow::Shear: return field_from_function(g, [&](double, double y) { return std::sin(pi * y) / pi; });
    case BaseFlow::PerturbedShear:
      return field_from_function(
          g, [&](double x, double y) { return std::sin(pi * y) / pi + eps * std::cos(kx * x) * (1.0 - y * y); });
    case BaseFlow::SmoothNoSlip:
      return field_from_function(g, [&](double x, double y) {
        const double b = (1.0 - y * y) * (1.0 - y * y);
        return b * (std::sin(kx * x) * (0.5 + y) + 0.3 * std::cos(2.0 * kx * x) * y + 0.2 * y);
      });
  }
  return SpectralScalarField(g);
}

/// Exact steady Euler velocity of the shear base flow.
inline VelocityField shear_velocity(const ChannelGrid& g) {
  const double pi = std::numbers::pi;
  VelocityField u(g);
  u.u1 = field_from_function(g, [&](double, double y) { return -std::cos(pi * y); });
  return u;
}

/// Adds a combination of T_{n-3}..T_n to every mode so that the series and
/// its slope vanish at both walls.
inline void project_clamped(SpectralScalarField& f) {
  const int n = f.grid().ny();
  Eigen::Matrix4d a;
  for (int c = 0; c < 4; ++c) {
    const int m = n - 3 + c;
    const double sg = (m % 2 == 0) ? 1.0 : -1.0;
    a(0, c) = 1.0;
    a(1, c) = sg;
    a(2, c) = double(m) * m;
    a(3, c) = -sg * double(m) * m;
  }
  const Eigen::PartialPivLU<Eigen::Matrix4d> lu(a);
  for (int k = 0; k < f.grid().modes(); ++k) {
    auto col = f.mode(k);
    const std::span<const Complex> cc(col.data(), col.size());
    Eigen::Vector4cd b;
    b << cheb::value_at_top(cc), cheb::value_at_bottom(cc), cheb::slope_at_top(cc), cheb::slope_at_bottom(cc);
    const Eigen::Vector4cd x = lu.solve(-b);
    for (int c = 0; c < 4; ++c) col[n - 3 + c] += x(c);
  }
}

/// No-slip initial data u0^a = grad-perp((1 - z) psi0) with z the C4 wall
/// cutoff of width delta = alpha.
inline VelocityField suitable_family(const SpectralScalarField& u0_stream, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
  detail::require_wall_zero(u0_stream);
  const auto& g = u0_stream.grid();
  if (nodes_in_strip(g, alpha) < 8)
    throw Unresolved("collar of width " + std::to_string(alpha) + " holds fewer than 8 nodes at ny=" +
                     std::to_string(g.ny()));
  const CorrectorSpec spec(alpha, CutoffProfile::C4);
  auto v = transform_inverse(u0_stream);
  const auto y = g.y_nodes();
  const int ny1 = g.ny() + 1;
  for (int j = 0; j < ny1; ++j) {
    const double keep = 1.0 - wall_cutoff(spec, y[j])[0];
    for (int i = 0; i < g.nx(); ++i) v[std::size_t(i) * ny1 + j] *= keep;
  }
  auto psi = transform_forward(g, v);
  project_clamped(psi);
  return velocity_from_stream(psi);
}

/// The three quantities whose scalings make a family suitable.
struct InitialDataTerms {
  double l2_gap = 0.0;     // ||u0^a - u0||
  double grad_term = 0.0;  // alpha^2 ||grad u0^a||^2
  double h3_term = 0.0;    // alpha^3 ||u0^a||_3
};

inline InitialDataTerms initial_data_terms(const VelocityField& ua, const VelocityField& u0, double alpha) {
  const auto d = ua - u0;
  const auto n = norms_of(ua);
  return {std::sqrt(norm_sq(d.u1) + norm_sq(d.u2)), alpha * alpha * n.h1_semi * n.h1_semi,
          std::pow(alpha, 3) * n.h3};
}

/// Smallest ny from a fixed ladder putting at least 8 nodes inside each of
/// the widths alpha, sqrt(alpha) and sqrt(nu T).
inline int resolve_ny(double alpha, double nu, double t_end, int min_ny = 64) {
  static constexpr std::array<int, 8> ladder = {64, 96, 128, 192, 256, 384, 512, 768};
  std::vector<double> widths;
  if (alpha > 0.0) {
    widths.push_back(alpha);
    widths.push_back(std::sqrt(alpha));
  }
  if (nu > 0.0 && t_end > 0.0) widths.push_back(std::sqrt(nu * t_end));
  for (int n : ladder) {
    if (n < min_ny) continue;
    bool ok = true;
    for (double w : widths)
      if (w < 1.0 && nodes_in_strip(n, w) < 8) ok = false;
    if (ok) return n;
  }
  throw Unresolved("no resolution in the ladder resolves alpha=" + std::to_string(alpha));
}

}  // namespace sgf
