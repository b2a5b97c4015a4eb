#pragma once

// One-dimensional Chebyshev machinery on [-1, 1]: Gauss-Lobatto nodes,
// Clenshaw-Curtis weights, coefficient-space calculus, and the tau solver
// for (D^2 - sigma) phi = f with Dirichlet data.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <type_traits>
#include <vector>

#include "sgf/error.hpp"

namespace sgf::cheb {

using Complex = std::complex<double>;

template <class T>
inline constexpr bool is_complex_v = !std::is_floating_point_v<T>;

/// y_j = cos(pi j / n), j = 0..n. Strictly decreasing from 1 to -1.
inline std::vector<double> nodes(int n) {
  std::vector<double> y(n + 1);
  for (int j = 0; j <= n; ++j) y[j] = std::cos(std::numbers::pi * j / n);
  y[0] = 1.0;
  y[n] = -1.0;
  // cos(pi/2) is not exactly zero in floating point.
  if (n % 2 == 0) y[n / 2] = 0.0;
  return y;
}

/// Clenshaw-Curtis weights matching nodes(n).
inline std::vector<double> cc_weights(int n) {
  std::vector<double> w(n + 1, 0.0);
  const double pi = std::numbers::pi;
  if (n % 2 == 0) {
    w[0] = w[n] = 1.0 / (double(n) * n - 1.0);
  } else {
    w[0] = w[n] = 1.0 / (double(n) * n);
  }
  for (int j = 1; j < n; ++j) {
    const double theta = pi * j / n;
    double v = 1.0;
    if (n % 2 == 0) {
      for (int k = 1; k < n / 2; ++k) v -= 2.0 * std::cos(2.0 * k * theta) / (4.0 * k * k - 1.0);
      v -= std::cos(n * theta) / (double(n) * n - 1.0);
    } else {
      for (int k = 1; k <= (n - 1) / 2; ++k) v -= 2.0 * std::cos(2.0 * k * theta) / (4.0 * k * k - 1.0);
    }
    w[j] = 2.0 * v / n;
  }
  return w;
}

/// Coefficients of d/dy of a Chebyshev series (same length, top entry zero).
template <class T>
std::vector<T> derivative(std::span<const T> a) {
  const int n = static_cast<int>(a.size()) - 1;
  std::vector<T> b(a.size(), T{});
  if (n < 1) return b;
  T next{};  // b_{m+1}
  T cur{};   // b_m
  for (int m = n; m >= 1; --m) {
    // b_{m-1} = b_{m+1} + 2 m a_m
    const T prev = next + 2.0 * m * a[m];
    next = cur;
    cur = prev;
    b[m - 1] = prev;
  }
  b[0] *= 0.5;
  return b;
}

template <class T>
std::vector<T> derivative(const std::vector<T>& a) {
  return derivative(std::span<const T>(a));
}

/// Antiderivative vanishing at y = -1. The degree n+1 term is dropped.
template <class T>
std::vector<T> antiderivative(std::span<const T> a) {
  const int n = static_cast<int>(a.size()) - 1;
  std::vector<T> b(a.size(), T{});
  for (int m = 1; m <= n; ++m) {
    const T lower = (m == 1 ? 2.0 : 1.0) * a[m - 1];
    const T upper = m + 1 <= n ? a[m + 1] : T{};
    b[m] = (lower - upper) / (2.0 * m);
  }
  T at_minus{};
  for (int m = 1; m <= n; ++m) at_minus += (m % 2 == 0 ? 1.0 : -1.0) * b[m];
  b[0] = -at_minus;
  return b;
}

template <class T>
std::vector<T> antiderivative(const std::vector<T>& a) {
  return antiderivative(std::span<const T>(a));
}

template <class T>
T value_at_top(std::span<const T> a) {
  T s{};
  for (const auto& c : a) s += c;
  return s;
}

template <class T>
T value_at_bottom(std::span<const T> a) {
  T s{};
  for (std::size_t m = 0; m < a.size(); ++m) s += (m % 2 == 0 ? 1.0 : -1.0) * a[m];
  return s;
}

template <class T>
T slope_at_top(std::span<const T> a) {
  T s{};
  for (std::size_t m = 0; m < a.size(); ++m) s += double(m * m) * a[m];
  return s;
}

template <class T>
T slope_at_bottom(std::span<const T> a) {
  T s{};
  for (std::size_t m = 0; m < a.size(); ++m) s += (m % 2 == 0 ? -1.0 : 1.0) * double(m * m) * a[m];
  return s;
}

/// Exact integral over [-1, 1] of a Chebyshev series.
template <class T>
T integral(std::span<const T> a) {
  T s{};
  for (std::size_t m = 0; m < a.size(); m += 2) s += a[m] * (2.0 / (1.0 - double(m * m)));
  return s;
}

/// Nodal values at nodes(n) from coefficients. O(n^2); meant for 1D profiles.
template <class T>
std::vector<T> to_values(std::span<const T> a) {
  const int n = static_cast<int>(a.size()) - 1;
  std::vector<T> f(a.size(), T{});
  for (int j = 0; j <= n; ++j) {
    T s{};
    for (int m = 0; m <= n; ++m) {
      // cos(pi m j / n) with the argument reduced mod 2n for accuracy.
      const long r = (long(m) * j) % (2L * n);
      s += a[m] * std::cos(std::numbers::pi * double(r) / n);
    }
    f[j] = s;
  }
  return f;
}

template <class T>
std::vector<T> from_values(std::span<const T> f) {
  const int n = static_cast<int>(f.size()) - 1;
  std::vector<T> a(f.size(), T{});
  for (int m = 0; m <= n; ++m) {
    T s{};
    for (int j = 0; j <= n; ++j) {
      const long r = (long(m) * j) % (2L * n);
      const double half = (j == 0 || j == n) ? 0.5 : 1.0;
      s += half * f[j] * std::cos(std::numbers::pi * double(r) / n);
    }
    const double cm = (m == 0 || m == n) ? 2.0 : 1.0;
    a[m] = s * (2.0 / (n * cm));
  }
  return a;
}

/// Evaluate the series at an arbitrary point by Clenshaw recurrence.
template <class T>
T evaluate(std::span<const T> a, double y) {
  T b1{}, b2{};
  for (int m = static_cast<int>(a.size()) - 1; m >= 1; --m) {
    const T b0 = a[m] + 2.0 * y * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return a.empty() ? T{} : a[0] + y * b1 - b2;
}

/// Tau solver for (D^2 - sigma) phi = f, phi(1) = top, phi(-1) = bottom.
///
/// The second-derivative relation is inverted analytically (each phi_m is
/// written in terms of the coefficients of phi''), which gives a system with
/// O(1) entries instead of the O(n^4) entries of the raw D^2 matrix. The
/// equation holds exactly for degrees 0..n-2; the two boundary rows replace
/// the top two.
class TauHelmholtz {
 public:
  TauHelmholtz(int n, double sigma) : n_(n), sigma_(sigma) {
    if (n < 2) throw InvalidArgument("TauHelmholtz needs at least degree 2");
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
      throw InvalidArgument("TauHelmholtz sigma must be finite and >= 0");
    }
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n + 1, n + 1);
    for (int m = 0; m <= n; ++m) {
      a(0, m) = 1.0;
      a(1, m) = (m % 2 == 0) ? 1.0 : -1.0;
    }
    for (int m = 2; m <= n; ++m) {
      a(m, m) += 1.0;
      for (const auto& [col, coef] : stencil(m)) a(m, col) -= coef * sigma;
    }
    lu_.compute(a);
    if (!(std::abs(lu_.determinant()) > 0.0)) throw SingularSystem("TauHelmholtz system is singular");
  }

  int degree() const noexcept { return n_; }
  double sigma() const noexcept { return sigma_; }

  template <class T>
  std::vector<T> solve(std::span<const T> f, T top, T bottom) const {
    if (static_cast<int>(f.size()) != n_ + 1) throw DimensionMismatch("TauHelmholtz rhs length");
    if constexpr (is_complex_v<T>) {
      Eigen::MatrixXd rhs(n_ + 1, 2);
      fill_rhs(f, top, bottom, rhs, [](const T& v) { return v.real(); }, 0);
      fill_rhs(f, top, bottom, rhs, [](const T& v) { return v.imag(); }, 1);
      const Eigen::MatrixXd x = lu_.solve(rhs);
      std::vector<T> out(n_ + 1);
      for (int m = 0; m <= n_; ++m) out[m] = T(x(m, 0), x(m, 1));
      return out;
    } else {
      Eigen::MatrixXd rhs(n_ + 1, 1);
      fill_rhs(f, top, bottom, rhs, [](const T& v) { return v; }, 0);
      const Eigen::MatrixXd x = lu_.solve(rhs);
      return std::vector<T>(x.data(), x.data() + n_ + 1);
    }
  }

  template <class T>
  std::vector<T> solve(const std::vector<T>& f, T top, T bottom) const {
    return solve(std::span<const T>(f), top, bottom);
  }

 private:
  struct Term {
    int col;
    double coef;
  };

  // phi_m = c_{m-2} g_{m-2} / (4m(m-1)) - g_m / (2(m^2-1)) + g_{m+2} / (4m(m+1)),
  // g = coefficients of phi'' (degree <= n-2).
  std::vector<Term> stencil(int m) const {
    std::vector<Term> t;
    const double c = (m - 2 == 0) ? 2.0 : 1.0;
    t.push_back({m - 2, c / (4.0 * m * (m - 1))});
    if (m <= n_ - 2) t.push_back({m, -1.0 / (2.0 * (double(m) * m - 1.0))});
    if (m + 2 <= n_ - 2) t.push_back({m + 2, 1.0 / (4.0 * m * (m + 1))});
    return t;
  }

  template <class T, class Part>
  void fill_rhs(std::span<const T> f, T top, T bottom, Eigen::MatrixXd& rhs, Part part, int col) const {
    rhs(0, col) = part(top);
    rhs(1, col) = part(bottom);
    for (int m = 2; m <= n_; ++m) {
      double s = 0.0;
      for (const auto& [c, coef] : stencil(m)) s += coef * part(f[c]);
      rhs(m, col) = s;
    }
  }

  int n_;
  double sigma_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

}  // namespace sgf::cheb
