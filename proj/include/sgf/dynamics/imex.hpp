#pragma once

#include <string>
#include <vector>

namespace sgf {

/// Additive Runge-Kutta pair: explicit (at, bt) for advection, diagonally
/// implicit (a, b) for the linear dissipative part.
struct ImexTableau {
  std::string name;
  int stages = 0;
  std::vector<std::vector<double>> at;  // strictly lower triangular
  std::vector<std::vector<double>> a;   // lower triangular
  std::vector<double> bt;
  std::vector<double> b;
  /// The last implicit stage is the step result.
  bool stiffly_accurate = false;

  double implicit_diag(int i) const { return a[i][i]; }
};

/// IMEX-SSP3(4,3,3) of Pareschi and Russo. Its explicit part is SSP-RK3 with
/// a leading dummy stage, so with no implicit term it reduces to SSP-RK3.
inline ImexTableau imex_ssp3() {
  const double g = 0.24169426078821;
  const double beta = g / 4.0;
  const double eta = (1.0 - 2.0 * g) / 4.0;
  ImexTableau t;
  t.name = "imex-ssp3(4,3,3)";
  t.stages = 4;
  t.at = {{0, 0, 0, 0}, {0, 0, 0, 0}, {0, 1, 0, 0}, {0, 0.25, 0.25, 0}};
  t.a = {{g, 0, 0, 0}, {-g, g, 0, 0}, {0, 1 - g, g, 0}, {beta, eta, 0.5 - beta - eta - g, g}};
  t.bt = {0, 1.0 / 6, 1.0 / 6, 2.0 / 3};
  t.b = {0, 1.0 / 6, 1.0 / 6, 2.0 / 3};
  return t;
}

/// ARS(4,4,3) of Ascher, Ruuth and Spiteri.
inline ImexTableau ars443() {
  ImexTableau t;
  t.name = "ars(4,4,3)";
  t.stages = 5;
  t.at = {{0, 0, 0, 0, 0},
          {0.5, 0, 0, 0, 0},
          {11.0 / 18, 1.0 / 18, 0, 0, 0},
          {5.0 / 6, -5.0 / 6, 0.5, 0, 0},
          {0.25, 1.75, 0.75, -1.75, 0}};
  t.a = {{0, 0, 0, 0, 0},
         {0, 0.5, 0, 0, 0},
         {0, 1.0 / 6, 0.5, 0, 0},
         {0, -0.5, 0.5, 0.5, 0},
         {0, 1.5, -1.5, 0.5, 0.5}};
  t.bt = {0.25, 1.75, 0.75, -1.75, 0};
  t.b = {0, 1.5, -1.5, 0.5, 0.5};
  t.stiffly_accurate = true;
  return t;
}

}  // namespace sgf
