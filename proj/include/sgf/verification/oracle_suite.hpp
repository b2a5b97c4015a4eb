#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "sgf/dynamics/run.hpp"
#include "sgf/spectral/elliptic.hpp"
#include "sgf/verification/oracles.hpp"

namespace sgf {

struct OracleResult {
  std::string name;
  double error = 0.0;
  double tolerance = 0.0;
  double seconds = 0.0;
  bool pass() const noexcept { return std::isfinite(error) && error <= tolerance; }
};

namespace detail {

inline std::vector<double> cheb_coeffs_of(const std::function<double(double)>& f, int n) {
  std::vector<double> v;
  for (double y : cheb::nodes(n)) v.push_back(f(y));
  return cheb::from_values<double>(v);
}

inline OracleResult timed(std::string name, double tol, const std::function<double()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  OracleResult r{std::move(name), 0.0, tol, 0.0};
  r.error = body();
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace detail

/// psi = (1 - y^2)^2 from (1 - alpha^2 D^2) D^2 psi = 12 y^2 - 10 at alpha = 0.5, ny = 48.
inline OracleResult oracle_clamped_quartic() {
  return detail::timed("clamped solve vs (1-y^2)^2, ny=48", 1e-9, [] {
    const int n = 48;
    const auto rhs = detail::cheb_coeffs_of([](double y) { return 12.0 * y * y - 10.0; }, n);
    const auto v = cheb::to_values<double>(solve_clamped_second_grade<double>(0.0, 0.5, rhs));
    const auto y = cheb::nodes(n);
    double e = 0.0;
    for (int j = 0; j <= n; ++j) e = std::max(e, std::abs(v[j] - std::pow(1.0 - y[j] * y[j], 2)));
    return e;
  });
}

/// psi'' = -(pi^2/4) cos(pi y / 2), psi(+-1) = 0.
inline OracleResult oracle_poisson_cosine() {
  return detail::timed("Poisson vs cos(pi y/2), ny=32", 1e-11, [] {
    const double pi = std::numbers::pi;
    const int n = 32;
    const auto rhs = detail::cheb_coeffs_of([&](double y) { return -(pi * pi / 4.0) * std::cos(pi * y / 2.0); }, n);
    const auto v = cheb::to_values<double>(solve_poisson_dirichlet<double>(0.0, rhs));
    const auto y = cheb::nodes(n);
    double e = 0.0;
    for (int j = 0; j <= n; ++j) e = std::max(e, std::abs(v[j] - std::cos(pi * y[j] / 2.0)));
    return e;
  });
}

/// Mean-flow relaxation of the second-grade stepper vs the matrix exponential, t = 0.1 (relative).
inline OracleResult oracle_relaxation() {
  return detail::timed("relaxation vs expm, t=0.1", 1e-8, [] {
    const double pi = std::numbers::pi;
    const int ny = 32;
    const ChannelGrid g(4, ny);
    const double alpha = 0.2, nu = 0.05;
    const ModelBranch b(alpha, nu);
    VelocityField u(g);
    u.u1 = field_from_function(g, [&](double, double y) { return std::sin(pi * y) + 0.3 * std::sin(2 * pi * y); });
    const auto s0 = initial_state(u, b);
    StepControl c{1e-4, 0.1, 0.5, 1000};
    const auto tr = run(s0, b, c);
    const auto q0 = cheb::to_values<double>(s0.q.mean_profile());
    const Eigen::VectorXd ref =
        oracle::relaxation(0.0, alpha, nu, Eigen::Map<const Eigen::VectorXd>(q0.data(), ny + 1), 0.1);
    const auto q1 = cheb::to_values<double>(tr.final_state->q.mean_profile());
    double err = 0.0, scale = 0.0;
    for (int j = 0; j <= ny; ++j) {
      err = std::max(err, std::abs(q1[j] - ref(j)));
      scale = std::max(scale, std::abs(ref(j)));
    }
    return err / scale;
  });
}

/// Navier-Stokes shear cos(pi y / 2) decaying to t = 1 at nu = 0.1.
inline OracleResult oracle_decaying_shear() {
  return detail::timed("NS decaying shear, t=1, nu=0.1", 1e-6, [] {
    const double pi = std::numbers::pi;
    const ChannelGrid g(4, 32);
    const double nu = 0.1;
    const ModelBranch b(0.0, nu);
    VelocityField u(g);
    u.u1 = field_from_function(g, [&](double, double y) { return std::cos(pi * y / 2); });
    StepControl c{1e-3, 1.0, 0.5, 1000};
    const auto tr = run(u, b, c);
    const auto v = cheb::to_values<double>(tr.final_state->u.u1.mean_profile());
    const auto y = g.y_nodes();
    double e = 0.0;
    for (int j = 0; j <= g.ny(); ++j) e = std::max(e, std::abs(v[j] - oracle::decaying_shear(y[j], 1.0, nu)));
    return e;
  });
}

inline std::vector<OracleResult> run_oracle_suite() {
  return {oracle_clamped_quartic(), oracle_poisson_cosine(), oracle_relaxation(), oracle_decaying_shear()};
}

}  // namespace sgf
