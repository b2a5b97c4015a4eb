#pragma once

// Per-Fourier-mode boundary-value solvers in Chebyshev coefficient space.
// All wavenumber arguments are physical (2 pi k / lx).

#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sgf/error.hpp"
#include "sgf/spectral/chebyshev.hpp"
#include "sgf/spectral/grid.hpp"

namespace sgf {

namespace detail {
inline void require_finite(std::span<const double> v, const char* what) {
  for (double x : v)
    if (!std::isfinite(x)) throw InvalidArgument(std::string(what) + " contains non-finite values");
}
inline void require_finite(std::span<const Complex> v, const char* what) {
  for (const auto& x : v)
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
      throw InvalidArgument(std::string(what) + " contains non-finite values");
}
}  // namespace detail

/// (D^2 - k^2) phi = rhs on (-1, 1), phi(+-1) = 0.
template <class T>
std::vector<T> solve_poisson_dirichlet(double k, std::span<const T> rhs) {
  detail::require_finite(rhs, "rhs");
  const cheb::TauHelmholtz tau(static_cast<int>(rhs.size()) - 1, k * k);
  return tau.solve(rhs, T{}, T{});
}

/// (D^2 - k^2 - lambda) phi = rhs, phi(1) = walls[0], phi(-1) = walls[1].
template <class T>
std::vector<T> solve_helmholtz_influence(double k, double lambda, std::span<const T> rhs,
                                         std::array<T, 2> walls) {
  if (!(lambda > 0.0)) throw InvalidArgument("lambda must be > 0");
  detail::require_finite(rhs, "rhs");
  const cheb::TauHelmholtz tau(static_cast<int>(rhs.size()) - 1, k * k + lambda);
  return tau.solve(rhs, walls[0], walls[1]);
}

/// Solves (1 - alpha^2 (D^2 - k^2)) (D^2 - k^2) psi = q with
/// psi(+-1) = 0 and D psi(+-1) = 0 for one Fourier mode.
///
/// Influence-matrix form: w = (D^2 - k^2) psi solves a Helmholtz problem with
/// unknown wall values (a, b); psi then solves a Dirichlet Poisson problem.
/// The two homogeneous responses are precomputed, and a 2x2 system picks
/// (a, b) so that the slope of psi vanishes at both walls. Factored once per
/// (n, k, alpha) and read-only afterwards.
class ClampedModeSolver {
 public:
  ClampedModeSolver(int n, double k, double alpha)
      : n_(n),
        k_(k),
        alpha_(alpha),
        helm_(n, k * k + 1.0 / (checked(alpha) * alpha)),
        poisson_(n, k * k) {
    const std::vector<double> zero(n + 1, 0.0);
    std::array<std::vector<double>, 2> psi_h, w_h;
    for (int s = 0; s < 2; ++s) {
      w_h[s] = helm_.solve(std::span<const double>(zero), s == 0 ? 1.0 : 0.0, s == 0 ? 0.0 : 1.0);
      psi_h[s] = poisson_.solve(std::span<const double>(w_h[s]), 0.0, 0.0);
    }
    g_ = {cheb::slope_at_top<double>(psi_h[0]), cheb::slope_at_top<double>(psi_h[1]),
          cheb::slope_at_bottom<double>(psi_h[0]), cheb::slope_at_bottom<double>(psi_h[1])};
    det_ = g_[0] * g_[3] - g_[1] * g_[2];
    if (!(std::abs(det_) > 0.0) || !std::isfinite(det_)) throw SingularSystem("clamped influence matrix is singular");
    psi_top_ = std::move(psi_h[0]);
    psi_bottom_ = std::move(psi_h[1]);
    w_top_ = std::move(w_h[0]);
    w_bottom_ = std::move(w_h[1]);
  }

  int degree() const noexcept { return n_; }
  double wavenumber() const noexcept { return k_; }
  double alpha() const noexcept { return alpha_; }

  template <class T>
  struct Solution {
    std::vector<T> psi;
    std::vector<T> lap;  // (D^2 - k^2) psi
  };

  /// psi together with its Laplacian, the latter without differentiating.
  template <class T>
  Solution<T> solve_full(std::span<const T> q) const {
    if (static_cast<int>(q.size()) != n_ + 1) throw DimensionMismatch("clamped solve rhs length");
    std::vector<T> rhs(q.size());
    const double scale = -1.0 / (alpha_ * alpha_);
    for (std::size_t m = 0; m < q.size(); ++m) rhs[m] = scale * q[m];
    auto w = helm_.solve(std::span<const T>(rhs), T{}, T{});
    auto psi = poisson_.solve(std::span<const T>(w), T{}, T{});
    const T st = cheb::slope_at_top<T>(psi);
    const T sb = cheb::slope_at_bottom<T>(psi);
    // g [a b]^T = -[st sb]^T
    const T a = (-st * g_[3] + sb * g_[1]) / det_;
    const T b = (-sb * g_[0] + st * g_[2]) / det_;
    for (std::size_t m = 0; m < psi.size(); ++m) {
      psi[m] += a * psi_top_[m] + b * psi_bottom_[m];
      w[m] += a * w_top_[m] + b * w_bottom_[m];
    }
    return {std::move(psi), std::move(w)};
  }

  template <class T>
  std::vector<T> solve(std::span<const T> q) const {
    return solve_full(q).psi;
  }

  template <class T>
  std::vector<T> solve(const std::vector<T>& q) const {
    return solve(std::span<const T>(q));
  }

 private:
  static double checked(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
      throw InvalidArgument("alpha must be > 0 for the clamped solve (route alpha = 0 to the Poisson path)");
    }
    return alpha;
  }

  int n_;
  double k_, alpha_;
  cheb::TauHelmholtz helm_;
  cheb::TauHelmholtz poisson_;
  std::array<double, 4> g_{};
  double det_ = 0.0;
  std::vector<double> psi_top_, psi_bottom_, w_top_, w_bottom_;
};

template <class T>
std::vector<T> solve_clamped_second_grade(double k, double alpha, std::span<const T> rhs) {
  detail::require_finite(rhs, "rhs");
  const ClampedModeSolver solver(static_cast<int>(rhs.size()) - 1, k, alpha);
  return solver.solve(rhs);
}

/// Mean-flow velocity from the mean filtered momentum:
/// (1 - eps^2 D^2) U = V with U(+-1) = 0. eps = 0 returns V unchanged.
class MeanFlowSolver {
 public:
  MeanFlowSolver(int n, double eps) : n_(n), eps_(eps) {
    if (!(eps >= 0.0) || !std::isfinite(eps)) throw InvalidArgument("mean-flow length must be >= 0");
    if (eps > 0.0) tau_.emplace(n, 1.0 / (eps * eps));
  }

  double length() const noexcept { return eps_; }

  std::vector<double> velocity(std::span<const double> v) const {
    if (static_cast<int>(v.size()) != n_ + 1) throw DimensionMismatch("mean profile length");
    if (!tau_) return {v.begin(), v.end()};
    std::vector<double> rhs(v.size());
    const double scale = -1.0 / (eps_ * eps_);
    for (std::size_t m = 0; m < v.size(); ++m) rhs[m] = scale * v[m];
    return tau_->solve(std::span<const double>(rhs), 0.0, 0.0);
  }

 private:
  int n_;
  double eps_;
  std::optional<cheb::TauHelmholtz> tau_;
};

}  // namespace sgf
