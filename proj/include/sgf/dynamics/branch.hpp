#pragma once

#include <cmath>
#include <string>
#include <string_view>

#include "sgf/error.hpp"

namespace sgf {

enum class ModelKind { SecondGrade, EulerAlpha, NavierStokes, Euler };

inline std::string_view to_string(ModelKind k) {
  switch (k) {
    case ModelKind::SecondGrade: return "second_grade";
    case ModelKind::EulerAlpha: return "euler_alpha";
    case ModelKind::NavierStokes: return "navier_stokes";
    case ModelKind::Euler: return "euler";
  }
  return "?";
}

inline ModelKind model_kind_from_string(std::string_view s) {
  if (s == "second_grade") return ModelKind::SecondGrade;
  if (s == "euler_alpha") return ModelKind::EulerAlpha;
  if (s == "navier_stokes") return ModelKind::NavierStokes;
  if (s == "euler") return ModelKind::Euler;
  throw InvalidArgument("unknown branch '" + std::string(s) + "'");
}

inline ModelKind classify_branch(double alpha, double nu) {
  if (alpha > 0.0) return nu > 0.0 ? ModelKind::SecondGrade : ModelKind::EulerAlpha;
  return nu > 0.0 ? ModelKind::NavierStokes : ModelKind::Euler;
}

struct ModelBranch {
  ModelKind kind = ModelKind::Euler;
  double alpha = 0.0;
  double nu = 0.0;

  ModelBranch() = default;
  ModelBranch(double a, double n) : kind(classify_branch(a, n)), alpha(a), nu(n) { validate(); }
  ModelBranch(ModelKind k, double a, double n) : kind(k), alpha(a), nu(n) { validate(); }

  void validate() const {
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw InvalidArgument("alpha must be ≥ 0");
    if (!(nu >= 0.0) || !std::isfinite(nu)) throw InvalidArgument("nu must be ≥ 0");
    if (kind != classify_branch(alpha, nu)) {
      throw InvalidArgument("branch " + std::string(to_string(kind)) + " is inconsistent with alpha=" +
                            std::to_string(alpha) + ", nu=" + std::to_string(nu));
    }
  }

  bool regularized() const noexcept { return alpha > 0.0; }
  bool viscous() const noexcept { return nu > 0.0; }
  /// No-slip walls for alpha > 0 or nu > 0; tangency only for Euler.
  bool no_slip() const noexcept { return kind != ModelKind::Euler; }
};

}  // namespace sgf
