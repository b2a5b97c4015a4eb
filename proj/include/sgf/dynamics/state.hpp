#pragma once

#include <cmath>
#include <memory>
#include <vector>

#include "sgf/dynamics/branch.hpp"
#include "sgf/fields/velocity.hpp"
#include "sgf/spectral/elliptic.hpp"

namespace sgf {

struct StepControl {
  double dt = 1e-3;
  double t_end = 1.0;
  double cfl_target = 0.5;
  int record_every = 1;

  void validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("dt must be > 0");
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw InvalidArgument("t_end must be >= 0");
    if (!(cfl_target > 0.0 && cfl_target <= 1.0)) throw InvalidArgument("cfl_target must lie in (0, 1]");
    if (record_every < 1) throw InvalidArgument("record_every must be >= 1");
  }

  /// Number of steps to cover a span of time with a dt no larger than requested.
  long steps_for(double span) const {
    if (span <= 0.0) return 0;
    return static_cast<long>(std::ceil(span / dt - 1e-9));
  }
  double effective_dt(double span) const {
    const long n = steps_for(span);
    return n > 0 ? span / static_cast<double>(n) : dt;
  }
};

/// The evolved variables plus everything recovered from them.
///
/// q holds the potential vorticity (plain vorticity when alpha = 0). The
/// x-mean filtered momentum profile V = U - alpha^2 U'' is carried next to
/// q because the curl loses the mean flux; the k = 0 column of q is -V'.
struct FlowState {
  double t = 0.0;
  SpectralScalarField q;
  std::vector<double> mean_momentum;
  SpectralScalarField psi;
  SpectralScalarField omega;
  VelocityField u;

  explicit FlowState(const ChannelGrid& g)
      : q(g), mean_momentum(g.ny() + 1, 0.0), psi(g), omega(g), u(g) {}

  const ChannelGrid& grid() const noexcept { return q.grid(); }
};

struct Recovery {
  SpectralScalarField psi;
  SpectralScalarField omega;
  VelocityField u;
};

namespace detail {

/// psi_0 = -int U with psi_0(1) + psi_0(-1) = 0.
inline std::vector<double> mean_stream(std::span<const double> u_mean) {
  auto p = cheb::antiderivative(u_mean);
  for (auto& c : p) c = -c;
  const double shift = 0.5 * (cheb::value_at_top<double>(p) + cheb::value_at_bottom<double>(p));
  p[0] -= shift;
  return p;
}

inline void set_mode(SpectralScalarField& f, int k, std::span<const Complex> v) {
  std::copy(v.begin(), v.end(), f.mode(k).begin());
}

}  // namespace detail

/// Per-mode velocity recovery for one branch on one grid. Factored once.
class Recoverer {
 public:
  Recoverer(const ChannelGrid& g, const ModelBranch& b) : grid_(g), branch_(b), mean_(g.ny(), b.alpha) {
    for (int k = 1; k < g.nyquist(); ++k) {
      if (b.alpha > 0.0) {
        clamped_.emplace_back(g.ny(), g.wavenumber(k), b.alpha);
      } else {
        const double kk = g.wavenumber(k);
        poisson_.emplace_back(g.ny(), kk * kk);
      }
    }
  }

  const ChannelGrid& grid() const noexcept { return grid_; }
  const ModelBranch& branch() const noexcept { return branch_; }

  Recovery recover(const SpectralScalarField& q, std::span<const double> mean_momentum) const {
    require_same_grid(q.grid(), grid_);
    Recovery r{SpectralScalarField(grid_), SpectralScalarField(grid_), VelocityField(grid_)};
    const auto u_mean = mean_.velocity(mean_momentum);
    fill_mean(r, u_mean);
    for (int k = 1; k < grid_.nyquist(); ++k) {
      if (branch_.alpha > 0.0) {
        const auto sol = clamped_[k - 1].solve_full(q.mode(k));
        detail::set_mode(r.psi, k, sol.psi);
        detail::set_mode(r.omega, k, sol.lap);
      } else {
        const auto psi = poisson_[k - 1].solve(q.mode(k), Complex{}, Complex{});
        detail::set_mode(r.psi, k, psi);
        detail::set_mode(r.omega, k, q.mode(k));
      }
    }
    fill_velocity(r, u_mean);
    return r;
  }

  /// Builds the k = 0 pieces of a recovery from a mean velocity profile.
  static void fill_mean(Recovery& r, std::span<const double> u_mean) {
    const auto psi0 = detail::mean_stream(u_mean);
    auto w0 = cheb::derivative(u_mean);
    for (auto& c : w0) c = -c;
    r.psi.set_mean_profile(psi0);
    r.omega.set_mean_profile(w0);
  }

  /// u from psi for k >= 1; the mean velocity is set directly.
  static void fill_velocity(Recovery& r, std::span<const double> u_mean) {
    r.u = velocity_from_stream(r.psi);
    r.u.u1.set_mean_profile(u_mean);
  }

  std::vector<double> mean_velocity(std::span<const double> mean_momentum) const {
    return mean_.velocity(mean_momentum);
  }

 private:
  ChannelGrid grid_;
  ModelBranch branch_;
  MeanFlowSolver mean_;
  std::vector<ClampedModeSolver> clamped_;
  std::vector<cheb::TauHelmholtz> poisson_;
};

/// V with V' = -q_0 and int V dy = mean.
inline std::vector<double> mean_momentum_from_q(const SpectralScalarField& q, double mean = 0.0) {
  const auto q0 = q.mean_profile();
  auto v = cheb::antiderivative(q0);
  for (auto& c : v) c = -c;
  v[0] += (mean - cheb::integral<double>(v)) / 2.0;
  return v;
}

/// Stream function, vorticity and velocity from q alone; the mean momentum
/// is fixed by its y-integral.
inline Recovery recover_velocity(const SpectralScalarField& q, const ModelBranch& branch, double mean = 0.0) {
  const Recoverer rec(q.grid(), branch);
  return rec.recover(q, mean_momentum_from_q(q, mean));
}

/// Sets q's k = 0 column to -V' and refreshes the cached fields.
inline void refresh(FlowState& s, const Recoverer& rec) {
  auto dv = cheb::derivative(std::span<const double>(s.mean_momentum));
  for (auto& c : dv) c = -c;
  s.q.set_mean_profile(dv);
  // Nyquist carries no information and stays zero.
  auto nyq = s.q.mode(s.grid().nyquist());
  std::fill(nyq.begin(), nyq.end(), Complex{});
  auto r = rec.recover(s.q, s.mean_momentum);
  s.psi = std::move(r.psi);
  s.omega = std::move(r.omega);
  s.u = std::move(r.u);
}

/// FlowState for a velocity field: q = curl(u - alpha^2 Lap u), V = mean of u1 - alpha^2 Lap u1.
inline FlowState initial_state(const VelocityField& u, const ModelBranch& branch, double t0 = 0.0) {
  FlowState s(u.grid());
  s.t = t0;
  s.q = q_from_u(u, branch.alpha);
  auto um = u.u1.mean_profile();
  auto d2 = cheb::derivative(cheb::derivative(std::span<const double>(um)));
  for (std::size_t m = 0; m < um.size(); ++m) um[m] -= branch.alpha * branch.alpha * d2[m];
  s.mean_momentum = std::move(um);
  refresh(s, Recoverer(u.grid(), branch));
  return s;
}

}  // namespace sgf
