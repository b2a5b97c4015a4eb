#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "sgf/fields/advection.hpp"
#include "sgf/fields/norms.hpp"
#include "sgf/util/fit.hpp"

namespace sgf {

/// Random stream functions psi = (1 - y^2)^2 p with p band-limited to a
/// quarter of the grid in both directions, so every quadratic and cubic
/// integrand in the bench is integrated exactly.
inline std::vector<SpectralScalarField> random_stream_corpus(const ChannelGrid& g, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n01;
  std::uniform_real_distribution<double> decay(0.2, 1.0);
  const int kmax = std::max(1, g.nx() / 4);
  const int mmax = std::max(0, g.ny() / 4 - 4);
  std::vector<SpectralScalarField> out;
  for (int c = 0; c < count; ++c) {
    SpectralScalarField p(g);
    const double rate = decay(rng);
    for (int k = 0; k <= kmax && k < g.nyquist(); ++k)
      for (int m = 0; m <= mmax; ++m) {
        const double a = std::exp(-rate * (k + m));
        p(k, m) = a * Complex(n01(rng), k == 0 ? 0.0 : n01(rng));
      }
    auto vals = transform_inverse(p);
    const auto y = g.y_nodes();
    const int ny1 = g.ny() + 1;
    for (int i = 0; i < g.nx(); ++i)
      for (int j = 0; j < ny1; ++j) {
        const double b = 1.0 - y[j] * y[j];
        vals[std::size_t(i) * ny1 + j] *= b * b;
      }
    out.push_back(transform_forward(g, vals));
  }
  return out;
}

struct InequalityReport {
  int entries = 0;
  int skipped = 0;
  std::vector<std::string> notes;
  /// max |<(Psi.grad)Phi, Phi>| / (||Psi||_1 ||Phi||_1 ||Phi||)
  double skew_residual = 0.0;
  /// max | ||curl u|| - ||grad u|| | / ||grad u||
  double curl_grad_residual = 0.0;
  /// max ||psi||_{L4}^2 / (||psi|| ||psi||_1)
  double ladyzhenskaya = 0.0;
  /// max ||u||_1^2 / (||u|| ||u||_2)
  double interpolation = 0.0;
  /// max ||u||_3 / ||Lap curl u||
  double h3_curl = 0.0;
  /// max over widths of ||u||_{strip} / (delta ||grad u||_{strip})
  double poincare = 0.0;
  std::vector<double> poincare_deltas;
  std::vector<double> poincare_by_delta;
  double poincare_slope = 0.0;
};

inline std::vector<double> default_poincare_deltas() { return {0.2, 0.1, 0.05, 0.025}; }

/// Evaluates the functional identities and inequalities over a corpus of
/// stream functions. Entries violating a hypothesis (zero trace) are skipped
/// for that inequality; identically zero entries contribute nothing.
inline InequalityReport inequality_bench(const std::vector<SpectralScalarField>& corpus,
                                         const std::vector<double>& poincare_deltas = default_poincare_deltas()) {
  if (corpus.empty()) throw InvalidArgument("empty corpus");
  InequalityReport rep;
  rep.poincare_deltas = poincare_deltas;
  rep.poincare_by_delta.assign(poincare_deltas.size(), 0.0);
  const Dealiaser dealias(corpus.front().grid());
  const double tiny = 1e-300;

  for (std::size_t e = 0; e < corpus.size(); ++e) {
    const auto& psi = corpus[e];
    ++rep.entries;
    const auto u = velocity_from_stream(psi);
    const auto nu = norms_of(u);
    if (nu.h1 <= tiny) {
      ++rep.skipped;
      rep.notes.push_back("entry " + std::to_string(e) + ": zero field, ratios skipped");
      continue;
    }
    const double scale = std::max(1.0, max_abs(transform_inverse(u.u1)));
    if (wall_speed(u) > 1e-10 * scale || std::max(max_abs(wall_trace(psi).top), max_abs(wall_trace(psi).bottom)) > 1e-10 * scale) {
      ++rep.skipped;
      rep.notes.push_back("entry " + std::to_string(e) + ": nonzero wall trace, skipped");
      continue;
    }

    // (Psi.grad) Phi . Phi with Psi = u and Phi the next entry's velocity.
    const auto phi = velocity_from_stream(corpus[(e + 1) % corpus.size()]);
    const auto np = norms_of(phi);
    if (np.h1 > tiny) {
      const double s = inner_product(dealias.advect(u, phi.u1).term, phi.u1) +
                       inner_product(dealias.advect(u, phi.u2).term, phi.u2);
      rep.skew_residual = std::max(rep.skew_residual, std::abs(s) / (nu.h1 * np.h1 * np.l2));
    }

    const double curl = std::sqrt(norm_sq(curl_of(u)));
    rep.curl_grad_residual = std::max(rep.curl_grad_residual, std::abs(curl - nu.h1_semi) / nu.h1_semi);

    const auto ns = norms_of(psi);
    rep.ladyzhenskaya = std::max(rep.ladyzhenskaya, l4_norm_sq(psi) / (ns.l2 * ns.h1));
    rep.interpolation = std::max(rep.interpolation, nu.h1 * nu.h1 / (nu.l2 * nu.h2));
    const double lap_curl = std::sqrt(norm_sq(laplacian(curl_of(u))));
    if (lap_curl > tiny) rep.h3_curl = std::max(rep.h3_curl, nu.h3 / lap_curl);

    for (std::size_t d = 0; d < poincare_deltas.size(); ++d) {
      const StripSpec strip(poincare_deltas[d]);
      const double a = std::sqrt(strip_norm_sq(u, strip));
      const double b = std::sqrt(strip_grad_norm_sq(u, strip));
      if (b > tiny) rep.poincare_by_delta[d] = std::max(rep.poincare_by_delta[d], a / (strip.delta * b));
    }
  }
  for (double r : rep.poincare_by_delta) rep.poincare = std::max(rep.poincare, r);
  if (poincare_deltas.size() >= 2 &&
      std::all_of(rep.poincare_by_delta.begin(), rep.poincare_by_delta.end(), [](double r) { return r > 0.0; }))
    rep.poincare_slope = log_log_fit(poincare_deltas, rep.poincare_by_delta).slope;
  return rep;
}

}  // namespace sgf
