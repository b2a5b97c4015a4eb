#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "sgf/diagnostics/energy.hpp"
#include "sgf/diagnostics/kato.hpp"
#include "sgf/dynamics/run.hpp"
#include "sgf/experiments/initial_data.hpp"
#include "sgf/experiments/regime.hpp"
#include "sgf/util/fit.hpp"

namespace sgf {

/// Euler solution the sweep rows are measured against.
struct ReferenceSolution {
  BaseFlow flow = BaseFlow::Shear;
  bool exact = false;
  /// For numeric references: samples at 2x resolution, dt / 2.
  std::optional<Trajectory> fine;
  /// max over samples of the 1x vs 2x velocity difference (0 when exact).
  double self_convergence_gap = 0.0;

  /// Reference velocity on grid g at sample time t.
  VelocityField velocity_at(double t, const ChannelGrid& g) const {
    if (exact) return flow == BaseFlow::Zero ? VelocityField(g) : shear_velocity(g);
    const auto& snaps = fine->snapshots;
    auto best = std::min_element(snaps.begin(), snaps.end(), [&](const FlowState& a, const FlowState& b) {
      return std::abs(a.t - t) < std::abs(b.t - t);
    });
    if (best == snaps.end() || std::abs(best->t - t) > 1e-9 * std::max(1.0, t))
      throw InvalidArgument("reference has no sample at t=" + std::to_string(t));
    return VelocityField(resample(best->u.u1, g), resample(best->u.u2, g));
  }

  /// ||u_ref(t)|| at every sample.
  std::vector<double> norms() const {
    std::vector<double> out;
    if (exact) return out;
    for (const auto& r : fine->records) out.push_back(std::sqrt(r.energy_alpha));
    return out;
  }
};

/// Steady closed form for the shear family. Otherwise Euler runs at (nx, ny)
/// with dt and at (2 nx, 2 ny) with dt / 2, sampled every record_every steps
/// of the coarse run; the fine one is the reference.
inline ReferenceSolution reference_solution(BaseFlow flow, const StepControl& ctrl, int nx = 16, int ny = 64,
                                            double eps = 0.05) {
  ReferenceSolution ref;
  ref.flow = flow;
  if (flow == BaseFlow::Shear || flow == BaseFlow::Zero) {
    ref.exact = true;
    return ref;
  }
  const ModelBranch euler(0.0, 0.0);
  const ChannelGrid coarse(nx, ny), fine(2 * nx, 2 * ny);
  StepControl cc = ctrl;
  Probes keep;
  keep.keep_snapshots = true;
  const auto tc = run(velocity_from_stream(base_stream(coarse, flow, eps)), euler, cc, keep);
  StepControl cf = ctrl;
  cf.dt = tc.ctrl.dt / 2.0;
  cf.record_every = 2 * ctrl.record_every;
  ref.fine = run(velocity_from_stream(base_stream(fine, flow, eps)), euler, cf, keep);
  for (const auto& s : tc.snapshots) {
    const auto d = s.u - ref.velocity_at(s.t, coarse);
    ref.self_convergence_gap = std::max(ref.self_convergence_gap, std::sqrt(norm_sq(d.u1) + norm_sq(d.u2)));
  }
  return ref;
}

struct SweepPlan {
  double path_exponent = 2.0;  // nu = c alpha^beta
  double path_coeff = 1.0;
  std::vector<double> alphas = {0.2, 0.1, 0.05, 0.025};
  BaseFlow base_flow = BaseFlow::Shear;
  double base_eps = 0.05;
  StepControl ctrl{1e-3, 1.0, 0.5, 10};
  StripRule strip_rule = StripRule::NuLinear;
  double strip_coeff = 1.0;
  int nx = 4;
  int min_ny = 64;
  /// Worker threads; 0 picks the hardware concurrency.
  int workers = 0;

  double nu_for(double alpha) const { return path_coeff * std::pow(alpha, path_exponent); }

  void validate() const {
    if (alphas.empty()) throw InvalidArgument("sweep needs at least one alpha");
    for (std::size_t i = 0; i < alphas.size(); ++i) {
      if (!(alphas[i] > 0.0 && alphas[i] < 1.0)) throw InvalidArgument("alphas must lie in (0, 1)");
      if (i > 0 && !(alphas[i] < alphas[i - 1])) throw InvalidArgument("alphas must be strictly decreasing");
    }
    if (!(path_coeff > 0.0)) throw InvalidArgument("path coefficient must be > 0");
    ctrl.validate();
  }
};

/// Plan along alpha = nu^(3/2), i.e. nu = alpha^(2/3), from a list of nu.
inline SweepPlan plan_from_nus(const std::vector<double>& nus) {
  SweepPlan p;
  p.path_exponent = 2.0 / 3.0;
  p.alphas.clear();
  for (double nu : nus) p.alphas.push_back(std::pow(nu, 1.5));
  p.strip_rule = StripRule::NuLinear;
  return p;
}

struct SweepRow {
  double alpha = 0.0;
  double nu = 0.0;
  std::string region;
  double delta_used = 0.0;
  double sup_err = 0.0;      // sup_t ||u(t) - u_ref(t)||
  double kato_value = 0.0;   // nu int_0^T int_strip |grad u|^2
  double ic_l2_gap = 0.0;    // ||u0^a - u0||
  double ic_grad_term = 0.0; // alpha^2 ||grad u0^a||^2
  double ic_h3_term = 0.0;   // alpha^3 ||u0^a||_3
  // not serialized
  double final_energy_gap = 0.0;  // ||u(T) - u_ref(T)||^2 + alpha^2 ||grad u(T)||^2
  double sup_alpha_grad = 0.0;    // sup_t alpha^2 ||grad u(t)||^2
  double sup_h3_scaled = 0.0;     // sup_t alpha^3 ||u(t)||_3
  double energy_residual = 0.0;
  int nx = 0;
  int ny = 0;
  double wall_seconds = 0.0;
  std::optional<std::string> failure;

  bool ok() const noexcept { return !failure.has_value(); }
};

inline SweepRow run_sweep_row(const SweepPlan& plan, double alpha, const ReferenceSolution& ref) {
  SweepRow row;
  row.alpha = alpha;
  row.nu = plan.nu_for(alpha);
  try {
    row.region = classify_regime(alpha, row.nu).label();
    row.delta_used = strip_width(plan.strip_rule, alpha, row.nu, plan.strip_coeff);
    row.nx = plan.nx;
    row.ny = resolve_ny(alpha, row.nu, plan.ctrl.t_end, plan.min_ny);
    const ChannelGrid g(row.nx, row.ny);
    const auto psi0 = base_stream(g, plan.base_flow, plan.base_eps);
    const auto u0 = velocity_from_stream(psi0);
    const auto ua = suitable_family(psi0, alpha);
    const auto terms = initial_data_terms(ua, u0, alpha);
    row.ic_l2_gap = terms.l2_gap;
    row.ic_grad_term = terms.grad_term;
    row.ic_h3_term = terms.h3_term;

    const ModelBranch branch(alpha, row.nu);
    Probes probes;
    probes.strip_deltas = {row.delta_used};
    probes.reference = [&](double t) { return ref.velocity_at(t, g); };
    const auto tr = run(ua, branch, plan.ctrl, probes);
    for (std::size_t i = 0; i < tr.records.size(); ++i) {
      const auto& r = tr.records[i];
      row.sup_err = std::max(row.sup_err, r.err_vs_ref_l2.value_or(0.0));
      row.sup_alpha_grad = std::max(row.sup_alpha_grad, alpha * alpha * r.grad_sq);
      row.sup_h3_scaled = std::max(row.sup_h3_scaled, tr.h3_scaled[i]);
    }
    const auto& last = tr.last();
    row.final_energy_gap = std::pow(last.err_vs_ref_l2.value_or(0.0), 2) + alpha * alpha * last.grad_sq;
    row.kato_value = kato_functional(tr, row.nu, StripSpec(row.delta_used));
    if (tr.records.size() >= 2 && tr.first().energy_alpha > 0.0) row.energy_residual = energy_balance_residual(tr);
    row.wall_seconds = tr.wall_seconds;
  } catch (const std::exception& e) {
    row.failure = e.what();
  }
  return row;
}

/// Runs every alpha of the plan; rows come back in plan order regardless of
/// which worker finished first.
inline std::vector<SweepRow> run_sweep(const SweepPlan& plan, const ReferenceSolution& ref) {
  plan.validate();
  std::vector<SweepRow> rows(plan.alphas.size());
  int workers = plan.workers > 0 ? plan.workers : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, static_cast<int>(rows.size()));
  if (workers == 1) {
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = run_sweep_row(plan, plan.alphas[i], ref);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < rows.size(); i += workers) rows[i] = run_sweep_row(plan, plan.alphas[i], ref);
      });
    for (auto& t : pool) t.join();
  }
  if (!ref.exact) {
    double min_err = std::numeric_limits<double>::infinity();
    for (const auto& r : rows)
      if (r.ok() && r.sup_err > 0.0) min_err = std::min(min_err, r.sup_err);
    if (std::isfinite(min_err) && ref.self_convergence_gap > 0.1 * min_err) {
      for (auto& r : rows)
        r.failure = "reference rejected: self-convergence gap " + std::to_string(ref.self_convergence_gap) +
                    " exceeds 10% of the smallest error " + std::to_string(min_err);
    }
  }
  return rows;
}

inline std::vector<SweepRow> run_sweep(const SweepPlan& plan) {
  const auto ref = reference_solution(plan.base_flow, plan.ctrl, std::max(plan.nx, 16), 64, plan.base_eps);
  return run_sweep(plan, ref);
}

/// Least-squares slope of log sup_err against log alpha with a 95% interval.
inline LinearFit rate_fit(const std::vector<SweepRow>& rows) {
  std::vector<double> a, e;
  for (const auto& r : rows)
    if (r.ok() && r.sup_err > 0.0 && r.alpha > 0.0) {
      a.push_back(r.alpha);
      e.push_back(r.sup_err);
    }
  if (a.size() < 3) throw InvalidArgument("rate fit needs at least three rows with positive error");
  return log_log_fit(a, e);
}

/// true when values[i] < values[i - 1] for all i.
inline bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return true;
}

}  // namespace sgf
