#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <vector>

#include "sgf/diagnostics/record.hpp"
#include "sgf/dynamics/stepper.hpp"

namespace sgf {

/// Hooks evaluated at each sample.
struct Probes {
  /// Strips whose |grad u|^2 time integrals are tracked. The first one feeds
  /// DiagnosticsRecord::strip_dissipation.
  std::vector<double> strip_deltas;
  /// Reference velocity at time t, for err_vs_ref_l2.
  std::function<VelocityField(double)> reference;
  /// Keep a copy of the state at every sample.
  bool keep_snapshots = false;
};

struct Trajectory {
  ModelBranch branch;
  StepControl ctrl;  // dt is the effective one
  std::vector<DiagnosticsRecord> records;
  std::vector<double> strip_deltas;
  /// Per record, per strip: int_0^t int_strip |grad u|^2 (no factor nu).
  std::vector<std::vector<double>> strip_integrals;
  /// Per record: alpha^3 ||u||_3.
  std::vector<double> h3_scaled;
  std::vector<FlowState> snapshots;
  std::optional<FlowState> final_state;
  long steps = 0;
  double wall_seconds = 0.0;

  const DiagnosticsRecord& first() const { return records.front(); }
  const DiagnosticsRecord& last() const { return records.back(); }
};

namespace detail {

inline DiagnosticsRecord sample(const FlowState& s, const ModelBranch& b, double cum_grad, double cum_strip,
                                const Probes& probes) {
  DiagnosticsRecord r;
  r.t = s.t;
  const double u2 = norm_sq(s.u.u1) + norm_sq(s.u.u2);
  r.grad_sq = grad_sq(s.u);
  r.energy_alpha = u2 + b.alpha * b.alpha * r.grad_sq;
  r.q_norm_sq = norm_sq(s.q);
  r.cum_dissipation = b.nu * cum_grad;
  r.strip_dissipation = b.nu * cum_strip;
  if (probes.reference) {
    const auto ref = probes.reference(s.t);
    const auto diff = s.u - ref;
    r.err_vs_ref_l2 = std::sqrt(norm_sq(diff.u1) + norm_sq(diff.u2));
  }
  return r;
}

}  // namespace detail

/// Integrates from a state up to ctrl.t_end.
inline Trajectory run(const FlowState& initial, const ModelBranch& branch, const StepControl& ctrl,
                      const Probes& probes = {}) {
  ctrl.validate();
  branch.validate();
  const auto start = std::chrono::steady_clock::now();
  const auto& g = initial.grid();
  const double span = ctrl.t_end - initial.t;
  const long n = ctrl.steps_for(span);

  Trajectory tr;
  tr.branch = branch;
  tr.ctrl = ctrl;
  tr.ctrl.dt = ctrl.effective_dt(span);
  tr.strip_deltas = probes.strip_deltas;
  std::vector<std::vector<double>> weights;
  for (double d : probes.strip_deltas) weights.push_back(strip_weights(g, d));

  const Stepper stepper(g, branch, tr.ctrl.dt, ctrl.cfl_target);
  std::vector<double> cum_strip(weights.size(), 0.0);
  double cum_grad = 0.0;
  auto record = [&](const FlowState& s) {
    tr.records.push_back(detail::sample(s, branch, cum_grad, cum_strip.empty() ? 0.0 : cum_strip[0], probes));
    tr.strip_integrals.push_back(cum_strip);
    tr.h3_scaled.push_back(std::pow(branch.alpha, 3) * norms_of(s.u).h3);
    if (probes.keep_snapshots) tr.snapshots.push_back(s);
  };

  FlowState s = initial;
  record(s);
  StepIntegrals inc;
  const double t0 = initial.t;
  for (long i = 1; i <= n; ++i) {
    s = stepper.step(s, weights, &inc);
    // t from the step count, so restarts land on the same times
    s.t = (i == n) ? ctrl.t_end : t0 + static_cast<double>(i) * tr.ctrl.dt;
    cum_grad += inc.grad_sq;
    for (std::size_t p = 0; p < weights.size(); ++p) cum_strip[p] += inc.strip_grad_sq[p];
    if (i % ctrl.record_every == 0 || i == n) record(s);
  }
  tr.steps = n;
  tr.final_state = std::move(s);
  tr.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return tr;
}

inline Trajectory run(const VelocityField& initial, const ModelBranch& branch, const StepControl& ctrl,
                      const Probes& probes = {}) {
  return run(initial_state(initial, branch), branch, ctrl, probes);
}

}  // namespace sgf
