#pragma once

// Reference computations that share no code with the tau solvers: dense
// nodal collocation on the Gauss-Lobatto points, and closed forms.

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numbers>
#include <vector>

namespace sgf::oracle {

/// Chebyshev collocation differentiation matrix on y_j = cos(pi j / n).
inline Eigen::MatrixXd diff_matrix(int n) {
  Eigen::VectorXd y(n + 1), c(n + 1);
  for (int j = 0; j <= n; ++j) {
    y(j) = std::cos(std::numbers::pi * j / n);
    c(j) = ((j == 0 || j == n) ? 2.0 : 1.0) * ((j % 2 == 0) ? 1.0 : -1.0);
  }
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n + 1, n + 1);
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      if (i != j) d(i, j) = (c(i) / c(j)) / (y(i) - y(j));
  // negative-sum trick for the diagonal
  for (int i = 0; i <= n; ++i) d(i, i) = -d.row(i).sum();
  return d;
}

inline Eigen::VectorXd nodes(int n) {
  Eigen::VectorXd y(n + 1);
  for (int j = 0; j <= n; ++j) y(j) = std::cos(std::numbers::pi * j / n);
  return y;
}

/// (D^2 - k^2) phi = f with phi(+-1) = 0, nodal in and out.
inline Eigen::VectorXd poisson(double k, const Eigen::VectorXd& f) {
  const int n = static_cast<int>(f.size()) - 1;
  const Eigen::MatrixXd d = diff_matrix(n);
  Eigen::MatrixXd a = d * d - k * k * Eigen::MatrixXd::Identity(n + 1, n + 1);
  Eigen::VectorXd b = f;
  a.row(0).setZero();
  a(0, 0) = 1.0;
  a.row(n).setZero();
  a(n, n) = 1.0;
  b(0) = b(n) = 0.0;
  return a.fullPivLu().solve(b);
}

/// Dense map f -> psi for (1 - alpha^2 L) L psi = f, L = D^2 - k^2, with
/// psi = D psi = 0 at both walls. The boundary rows replace the first two
/// and last two collocation equations.
inline Eigen::MatrixXd clamped_inverse(int n, double k, double alpha) {
  const Eigen::MatrixXd d = diff_matrix(n);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n + 1, n + 1);
  const Eigen::MatrixXd l = d * d - k * k * id;
  Eigen::MatrixXd a = (id - alpha * alpha * l) * l;
  Eigen::MatrixXd sel = id;
  a.row(0) = id.row(0);
  a.row(1) = d.row(0);
  a.row(n - 1) = d.row(n);
  a.row(n) = id.row(n);
  for (int r : {0, 1, n - 1, n}) sel.row(r).setZero();
  return a.fullPivLu().solve(sel);
}

inline Eigen::VectorXd clamped(double k, double alpha, const Eigen::VectorXd& f) {
  const int n = static_cast<int>(f.size()) - 1;
  return clamped_inverse(n, k, alpha) * f;
}

/// Linear relaxation dq/dt = -(nu/alpha^2)(q - omega[q]) of one Fourier mode,
/// advanced exactly by the matrix exponential. Nodal in and out.
inline Eigen::VectorXd relaxation(double k, double alpha, double nu, const Eigen::VectorXd& q0, double t) {
  const int n = static_cast<int>(q0.size()) - 1;
  const Eigen::MatrixXd d = diff_matrix(n);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n + 1, n + 1);
  const Eigen::MatrixXd omega_of_q = (d * d - k * k * id) * clamped_inverse(n, k, alpha);
  const Eigen::MatrixXd gen = -(nu / (alpha * alpha)) * (id - omega_of_q) * t;
  return gen.exp() * q0;
}

/// Unforced no-slip shear U(y, t) = cos(pi y / 2) exp(-nu pi^2 t / 4).
inline double decaying_shear(double y, double t, double nu) {
  const double pi = std::numbers::pi;
  return std::cos(0.5 * pi * y) * std::exp(-nu * pi * pi * t / 4.0);
}

/// Squared L2 norm of the decaying shear over one channel period.
inline double decaying_shear_energy(double t, double nu, double lx) {
  const double pi = std::numbers::pi;
  return lx * std::exp(-nu * pi * pi * t / 2.0);
}

}  // namespace sgf::oracle
