#pragma once

#include <cmath>
#include <string>

#include "sgf/error.hpp"

namespace sgf {

/// Regions of the (alpha, nu) plane separated by nu = alpha^(2/3),
/// nu = alpha^(6/5) and nu = alpha^2.
enum class Region { I, II, III, IV, BoundaryI_II, BoundaryII_III, BoundaryIII_IV };

struct RegimeRegion {
  Region region = Region::IV;

  bool on_boundary() const noexcept {
    return region == Region::BoundaryI_II || region == Region::BoundaryII_III || region == Region::BoundaryIII_IV;
  }
  /// 1..4 for the open regions; boundaries sit halfway between neighbours.
  double index() const noexcept {
    switch (region) {
      case Region::I: return 1.0;
      case Region::BoundaryI_II: return 1.5;
      case Region::II: return 2.0;
      case Region::BoundaryII_III: return 2.5;
      case Region::III: return 3.0;
      case Region::BoundaryIII_IV: return 3.5;
      case Region::IV: return 4.0;
    }
    return 0.0;
  }
  std::string label() const {
    switch (region) {
      case Region::I: return "I";
      case Region::II: return "II";
      case Region::III: return "III";
      case Region::IV: return "IV";
      case Region::BoundaryI_II: return "boundary I/II";
      case Region::BoundaryII_III: return "boundary II/III";
      case Region::BoundaryIII_IV: return "boundary III/IV";
    }
    return "?";
  }
  friend bool operator==(const RegimeRegion&, const RegimeRegion&) = default;
};

/// Relative tolerance for landing exactly on a curve.
inline constexpr double regime_curve_tolerance = 1e-12;

inline RegimeRegion classify_regime(double alpha, double nu) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
  if (!(nu > 0.0 && nu < 1.0)) throw InvalidArgument("nu must lie in (0, 1)");
  auto on = [&](double curve) { return std::abs(nu - curve) <= regime_curve_tolerance * curve; };
  const double c12 = std::pow(alpha, 2.0 / 3.0);
  const double c23 = std::pow(alpha, 6.0 / 5.0);
  const double c34 = alpha * alpha;
  if (on(c12)) return {Region::BoundaryI_II};
  if (on(c23)) return {Region::BoundaryII_III};
  if (on(c34)) return {Region::BoundaryIII_IV};
  if (nu > c12) return {Region::I};
  if (nu > c23) return {Region::II};
  if (nu > c34) return {Region::III};
  return {Region::IV};
}

}  // namespace sgf
