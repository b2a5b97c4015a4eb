#pragma once

#include <optional>

namespace sgf {

/// Scalars sampled along a trajectory.
struct DiagnosticsRecord {
  double t = 0.0;
  double energy_alpha = 0.0;       // ||u||^2 + alpha^2 ||grad u||^2
  double grad_sq = 0.0;            // ||grad u||^2
  double q_norm_sq = 0.0;          // ||q||^2
  double cum_dissipation = 0.0;    // nu int_0^t ||grad u||^2
  double strip_dissipation = 0.0;  // nu int_0^t int_strip |grad u|^2
  std::optional<double> err_vs_ref_l2;

  friend bool operator==(const DiagnosticsRecord&, const DiagnosticsRecord&) = default;
};

}  // namespace sgf
