#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "sgf/dynamics/run.hpp"
#include "sgf/fields/norms.hpp"

namespace sgf {

/// ||u||^2 + alpha^2 ||grad u||^2.
inline double energy_alpha(const VelocityField& u, double alpha) {
  const auto n = norms_of(u);
  return n.l2 * n.l2 + alpha * alpha * n.h1_semi * n.h1_semi;
}

/// max_t |E_a(t) + factor * cum_dissipation(t) - E_a(0)| / E_a(0).
///
/// factor = 2 is the balance satisfied by the equations. The CLI also
/// reports factor = 1.
inline double energy_balance_residual(const Trajectory& tr, double factor = 2.0) {
  if (tr.records.size() < 2) throw InvalidArgument("energy balance needs at least two samples");
  const double e0 = tr.first().energy_alpha;
  if (!(e0 > 0.0)) throw InvalidArgument("initial energy is zero");
  double worst = 0.0;
  for (const auto& r : tr.records)
    worst = std::max(worst, std::abs(r.energy_alpha + factor * r.cum_dissipation - e0) / e0);
  return worst;
}

/// min over samples of exp(-nu t / (2 alpha^2)) ||q0||^2 + e0 / (2 alpha^2) - ||q(t)||^2.
inline double q_bound_check(const Trajectory& tr, double alpha, double nu, double q0_norm_sq, double e0) {
  if (!tr.branch.regularized() || !(alpha > 0.0))
    throw InvalidArgument("q bound applies to second-grade and Euler-alpha trajectories");
  if (tr.records.empty()) throw InvalidArgument("empty trajectory");
  double margin = std::numeric_limits<double>::infinity();
  for (const auto& r : tr.records) {
    const double rhs = std::exp(-0.5 * (nu / (alpha * alpha)) * r.t) * q0_norm_sq + e0 / (2.0 * alpha * alpha);
    margin = std::min(margin, rhs - r.q_norm_sq);
  }
  return margin;
}

inline double q_bound_check(const Trajectory& tr) {
  return q_bound_check(tr, tr.branch.alpha, tr.branch.nu, tr.first().q_norm_sq, tr.first().energy_alpha);
}

}  // namespace sgf
