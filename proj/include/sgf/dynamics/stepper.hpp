#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "sgf/dynamics/imex.hpp"
#include "sgf/dynamics/state.hpp"
#include "sgf/fields/advection.hpp"
#include "sgf/fields/norms.hpp"

namespace sgf {

/// Time integrals over one step, accumulated at the stage values with the
/// implicit weights.
struct StepIntegrals {
  double grad_sq = 0.0;
  std::vector<double> strip_grad_sq;
};

/// One-step map for a fixed (grid, branch, dt).
///
/// Advection -u.grad q is explicit. The dissipative part is implicit: for
/// alpha > 0 it is the relaxation -(nu/alpha^2)(q - omega[q]), for alpha = 0
/// it is nu Lap omega with no-slip imposed through psi. Both reduce to one
/// clamped solve per mode with alpha_eff^2 = alpha^2 + gamma nu, gamma the
/// stage's implicit coefficient times dt. Advective branches (nu = 0) use
/// SSP-RK3 through the same tableau.
class Stepper {
 public:
  Stepper(const ChannelGrid& g, const ModelBranch& b, double dt, double cfl_target = 0.5)
      : grid_(g),
        branch_(b),
        dt_(dt),
        cfl_target_(cfl_target),
        tableau_(b.kind == ModelKind::NavierStokes ? ars443() : imex_ssp3()),
        rec_(g, b),
        dealias_(g) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("dt must be > 0");
    if (!(cfl_target > 0.0 && cfl_target <= 1.0)) throw InvalidArgument("cfl_target must lie in (0, 1]");
    if (b.viscous()) {
      // every implicit stage of both tableaux shares one diagonal entry
      for (int i = 0; i < tableau_.stages; ++i)
        if (tableau_.implicit_diag(i) > 0.0) gamma_ = tableau_.implicit_diag(i) * dt;
      const double eff2 = b.alpha * b.alpha + gamma_ * b.nu;
      mean_implicit_.emplace(g.ny(), 1.0 / eff2);
      for (int k = 1; k < g.nyquist(); ++k) implicit_.emplace_back(g.ny(), g.wavenumber(k), std::sqrt(eff2));
    }
  }

  const ChannelGrid& grid() const noexcept { return grid_; }
  const ModelBranch& branch() const noexcept { return branch_; }
  const ImexTableau& tableau() const noexcept { return tableau_; }
  const Recoverer& recoverer() const noexcept { return rec_; }
  double dt() const noexcept { return dt_; }

  FlowState initial(const VelocityField& u, double t0 = 0.0) const { return initial_state(u, branch_, t0); }

  /// dt * max over nodes of |u1|/dx + |u2|/dy.
  double cfl_number(const FlowState& s) const {
    const auto u1 = transform_inverse(s.u.u1);
    const auto u2 = transform_inverse(s.u.u2);
    const int ny1 = grid_.ny() + 1;
    std::vector<double> inv_dy(ny1);
    for (int j = 0; j < ny1; ++j) inv_dy[j] = 1.0 / grid_.dy_local(j);
    const double inv_dx = 1.0 / grid_.dx();
    double m = 0.0;
    for (int i = 0; i < grid_.nx(); ++i)
      for (int j = 0; j < ny1; ++j) {
        const std::size_t p = std::size_t(i) * ny1 + j;
        m = std::max(m, std::abs(u1[p]) * inv_dx + std::abs(u2[p]) * inv_dy[j]);
      }
    return dt_ * m;
  }

  /// Advances s by dt. strip_weights lists y-weight vectors (see
  /// strip_weights()) whose |grad u|^2 integrals are accumulated into out.
  FlowState step(const FlowState& s, const std::vector<std::vector<double>>& strips = {},
                 StepIntegrals* out = nullptr) const {
    require_same_grid(s.grid(), grid_);
    const double cfl = cfl_number(s);
    if (cfl > cfl_target_) throw CflViolation(cfl, dt_ * cfl_target_ / cfl);
    if (out) {
      out->grad_sq = 0.0;
      out->strip_grad_sq.assign(strips.size(), 0.0);
    }

    const auto& tb = tableau_;
    const int ns = tb.stages;
    const bool implicit = branch_.viscous();
    std::vector<std::optional<SpectralScalarField>> nq(ns), lq(ns);
    std::vector<std::vector<double>> nv(ns), lv(ns);
    SpectralScalarField q_last(grid_);
    std::vector<double> v_last;

    for (int i = 0; i < ns; ++i) {
      SpectralScalarField r = s.q;
      std::vector<double> rv = s.mean_momentum;
      for (int j = 0; j < i; ++j) {
        if (tb.at[i][j] != 0.0) {
          r.axpy(dt_ * tb.at[i][j], *nq[j]);
          axpy(rv, dt_ * tb.at[i][j], nv[j]);
        }
        if (implicit && tb.a[i][j] != 0.0) {
          r.axpy(dt_ * tb.a[i][j], *lq[j]);
          axpy(rv, dt_ * tb.a[i][j], lv[j]);
        }
      }

      const double gamma = tb.a[i][i] * dt_;
      SpectralScalarField qs(grid_);
      std::vector<double> vs;
      std::optional<Recovery> rec;
      if (implicit && gamma > 0.0) {
        rec = implicit_solve(r, rv, qs, vs);
        SpectralScalarField l = qs;
        l -= r;
        l *= 1.0 / gamma;
        lq[i] = std::move(l);
        lv[i] = vs;
        axpy(lv[i], -1.0, rv);
        for (auto& c : lv[i]) c /= gamma;
      } else {
        qs = std::move(r);
        vs = std::move(rv);
        rec = rec_.recover(qs, vs);
      }

      if (needs_explicit(i)) {
        auto adv = dealias_.advect(rec->u, qs);
        adv.term *= -1.0;
        nq[i] = std::move(adv.term);
        nv[i] = std::move(adv.mean_flux);
      }
      if (out && tb.b[i] != 0.0) {
        const auto dens = grad_density(rec->u);
        out->grad_sq += dt_ * tb.b[i] * nodal_integral(grid_, dens);
        for (std::size_t p = 0; p < strips.size(); ++p)
          out->strip_grad_sq[p] += dt_ * tb.b[i] * nodal_integral(grid_, dens, strips[p]);
      }
      if (i == ns - 1) {
        q_last = std::move(qs);
        v_last = std::move(vs);
      }
    }

    FlowState next(grid_);
    next.t = s.t + dt_;
    if (tb.stiffly_accurate) {
      next.q = std::move(q_last);
      next.mean_momentum = std::move(v_last);
    } else {
      next.q = s.q;
      next.mean_momentum = s.mean_momentum;
      for (int i = 0; i < ns; ++i) {
        if (tb.bt[i] != 0.0) {
          next.q.axpy(dt_ * tb.bt[i], *nq[i]);
          axpy(next.mean_momentum, dt_ * tb.bt[i], nv[i]);
        }
        if (implicit && tb.b[i] != 0.0) {
          next.q.axpy(dt_ * tb.b[i], *lq[i]);
          axpy(next.mean_momentum, dt_ * tb.b[i], lv[i]);
        }
      }
    }
    refresh(next, rec_);
    if (!next.q.all_finite()) throw Error("non-finite state after step at t=" + std::to_string(next.t));
    return next;
  }

 private:
  static void axpy(std::vector<double>& y, double a, const std::vector<double>& x) {
    for (std::size_t m = 0; m < y.size(); ++m) y[m] += a * x[m];
  }

  bool needs_explicit(int i) const {
    const auto& tb = tableau_;
    if (!tb.stiffly_accurate && tb.bt[i] != 0.0) return true;
    for (int j = i + 1; j < tb.stages; ++j)
      if (tb.at[j][i] != 0.0) return true;
    return false;
  }

  // Solves Q - gamma L(Q) = R. With omega the Laplacian of the clamped
  // psi at alpha_eff, Q = (alpha^2 R + gamma nu omega) / (alpha^2 + gamma nu),
  // and psi is exactly the recovery of Q.
  Recovery implicit_solve(const SpectralScalarField& r, const std::vector<double>& rv, SpectralScalarField& q,
                          std::vector<double>& v) const {
    const double a2 = branch_.alpha * branch_.alpha;
    const double gn = gamma_ * branch_.nu;
    const double inv = 1.0 / (a2 + gn);
    Recovery out{SpectralScalarField(grid_), SpectralScalarField(grid_), VelocityField(grid_)};

    std::vector<double> rhs(rv.size());
    for (std::size_t m = 0; m < rv.size(); ++m) rhs[m] = -inv * rv[m];
    const auto u_mean = mean_implicit_->solve(std::span<const double>(rhs), 0.0, 0.0);
    v.resize(rv.size());
    for (std::size_t m = 0; m < rv.size(); ++m) v[m] = (a2 * rv[m] + gn * u_mean[m]) * inv;
    Recoverer::fill_mean(out, u_mean);

    for (int k = 1; k < grid_.nyquist(); ++k) {
      const auto sol = implicit_[k - 1].solve_full(r.mode(k));
      auto qk = q.mode(k);
      const auto rk = r.mode(k);
      for (std::size_t m = 0; m < qk.size(); ++m) qk[m] = (a2 * rk[m] + gn * sol.lap[m]) * inv;
      detail::set_mode(out.psi, k, sol.psi);
      detail::set_mode(out.omega, k, sol.lap);
    }
    auto dv = cheb::derivative(std::span<const double>(v));
    for (auto& c : dv) c = -c;
    q.set_mean_profile(dv);
    Recoverer::fill_velocity(out, u_mean);
    return out;
  }

  ChannelGrid grid_;
  ModelBranch branch_;
  double dt_;
  double cfl_target_;
  ImexTableau tableau_;
  Recoverer rec_;
  Dealiaser dealias_;
  double gamma_ = 0.0;
  std::optional<cheb::TauHelmholtz> mean_implicit_;
  std::vector<ClampedModeSolver> implicit_;
};

inline FlowState step_second_grade(const FlowState& s, const ModelBranch& b, const StepControl& c) {
  if (!b.regularized()) throw InvalidArgument("step_second_grade needs alpha > 0");
  return Stepper(s.grid(), b, c.dt, c.cfl_target).step(s);
}

inline FlowState step_navier_stokes(const FlowState& s, const ModelBranch& b, const StepControl& c) {
  if (b.kind != ModelKind::NavierStokes) throw InvalidArgument("step_navier_stokes needs alpha = 0, nu > 0");
  return Stepper(s.grid(), b, c.dt, c.cfl_target).step(s);
}

inline FlowState step_euler(const FlowState& s, const ModelBranch& b, const StepControl& c) {
  if (b.kind != ModelKind::Euler) throw InvalidArgument("step_euler needs alpha = nu = 0");
  return Stepper(s.grid(), b, c.dt, c.cfl_target).step(s);
}

}  // namespace sgf
