#pragma once

#include <cmath>
#include <string>
#include <string_view>

#include "sgf/dynamics/run.hpp"

namespace sgf {

enum class StripRule { AlphaCubed, NuLinear };

inline std::string_view to_string(StripRule r) { return r == StripRule::AlphaCubed ? "alpha_cubed" : "nu_linear"; }

inline StripRule strip_rule_from_string(std::string_view s) {
  if (s == "alpha_cubed") return StripRule::AlphaCubed;
  if (s == "nu_linear") return StripRule::NuLinear;
  throw InvalidArgument("unknown strip rule '" + std::string(s) + "'");
}

/// delta = c alpha^3 / nu^(3/2) or delta = c nu.
inline double strip_width(StripRule rule, double alpha, double nu, double c) {
  if (!(c > 0.0) || !(nu > 0.0)) throw InvalidArgument("strip constant and nu must be > 0");
  double d = 0.0;
  if (rule == StripRule::AlphaCubed) {
    if (!(alpha > 0.0)) throw InvalidArgument("alpha must be > 0");
    d = c * alpha * alpha * alpha / std::pow(nu, 1.5);
  } else {
    d = c * nu;
  }
  if (!(d < 1.0)) throw ConfigError("strip width " + std::to_string(d) + " reaches the channel centre");
  return d;
}

/// nu int_0^T int_strip |grad u|^2 from the strip integrals carried by tr.
inline double kato_functional(const Trajectory& tr, double nu, const StripSpec& strip) {
  for (std::size_t p = 0; p < tr.strip_deltas.size(); ++p) {
    if (std::abs(tr.strip_deltas[p] - strip.delta) <= 1e-12 * strip.delta) {
      if (tr.strip_integrals.empty()) throw InvalidArgument("trajectory has no samples");
      return nu * tr.strip_integrals.back()[p];
    }
  }
  throw InvalidArgument("trajectory carries no strip probe of width " + std::to_string(strip.delta));
}

}  // namespace sgf
