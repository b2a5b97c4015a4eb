#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sgf/experiments/sweep.hpp"

using namespace sgf;
constexpr double pi = std::numbers::pi;

namespace {

std::vector<double> column(const std::vector<SweepRow>& rows, double SweepRow::*m) {
  std::vector<double> out;
  for (const auto& r : rows) out.push_back(r.*m);
  return out;
}

SweepPlan short_plan(double beta) {
  SweepPlan p;
  p.path_exponent = beta;
  p.ctrl.t_end = 0.25;
  p.ctrl.dt = 2.5e-3;
  p.ctrl.record_every = 5;
  p.alphas = {0.2, 0.1, 0.05};
  return p;
}

}  // namespace

TEST(Regime, Examples) {
  EXPECT_EQ(classify_regime(0.01, 1e-4).label(), "boundary III/IV");
  EXPECT_EQ(classify_regime(0.01, 1e-3).region, Region::III);
  EXPECT_EQ(classify_regime(0.01, 0.1).region, Region::I);
  EXPECT_EQ(classify_regime(0.01, 0.01).region, Region::II);
  EXPECT_EQ(classify_regime(0.01, 1e-5).region, Region::IV);
  EXPECT_EQ(classify_regime(0.01, std::pow(0.01, 1.2)).label(), "boundary II/III");
  EXPECT_EQ(classify_regime(0.001, 0.01).label(), "boundary I/II");
  EXPECT_TRUE(classify_regime(0.01, 1e-4).on_boundary());
  EXPECT_FALSE(classify_regime(0.01, 1e-3).on_boundary());
}

TEST(Regime, Errors) {
  EXPECT_THROW(classify_regime(0.0, 0.1), InvalidArgument);
  EXPECT_THROW(classify_regime(1.0, 0.1), InvalidArgument);
  EXPECT_THROW(classify_regime(0.1, 0.0), InvalidArgument);
  EXPECT_THROW(classify_regime(0.1, 1.5), InvalidArgument);
  EXPECT_THROW(classify_regime(NAN, 0.1), InvalidArgument);
}

TEST(Regime, MonotoneInNu) {
  for (double a : {0.5, 0.1, 0.01, 1e-4}) {
    double prev = 5.0;
    for (double lnu = -12.0; lnu < 0.0; lnu += 0.01) {
      const double idx = classify_regime(a, std::exp(lnu)).index();
      EXPECT_LE(idx, prev);
      prev = idx;
    }
  }
}

TEST(InitialData, ResolveNy) {
  EXPECT_EQ(resolve_ny(0.2, 0.04, 1.0), 64);
  EXPECT_EQ(resolve_ny(0.025, 0.000625, 1.0), 128);
  EXPECT_EQ(resolve_ny(0.2, 0.04, 1.0, 100), 128);
  EXPECT_THROW(resolve_ny(1e-5, 1e-3, 1.0), Unresolved);
  for (double a : {0.2, 0.05, 0.01}) {
    const ChannelGrid g(4, resolve_ny(a, a, 1.0));
    EXPECT_GE(nodes_in_strip(g, a), 8);
    EXPECT_GE(nodes_in_strip(g, std::sqrt(a)), 8);
  }
}

TEST(InitialData, BaseFlowsVanishAtWalls) {
  const ChannelGrid g(16, 48);
  for (auto f : {BaseFlow::Zero, BaseFlow::Shear, BaseFlow::PerturbedShear, BaseFlow::SmoothNoSlip}) {
    const auto w = wall_trace(base_stream(g, f));
    EXPECT_LE(std::max(max_abs(w.top), max_abs(w.bottom)), 1e-13) << to_string(f);
    EXPECT_EQ(base_flow_from_string(to_string(f)), f);
  }
  EXPECT_THROW(base_flow_from_string("couette"), InvalidArgument);
  const auto u = velocity_from_stream(base_stream(g, BaseFlow::Shear));
  EXPECT_LE((u.u1 - shear_velocity(g).u1).max_abs_coeff(), 1e-13);
}

TEST(InitialData, SuitableFamilyIsNoSlip) {
  const ChannelGrid g(16, 64);
  for (auto f : {BaseFlow::Shear, BaseFlow::PerturbedShear}) {
    const auto ua = suitable_family(base_stream(g, f), 0.2);
    EXPECT_LE(wall_speed(ua), 1e-12);
    EXPECT_LE(max_abs(transform_inverse(divergence_of(ua))), 1e-10);
    EXPECT_NO_THROW(initial_state(ua, ModelBranch(0.2, 0.04)));
  }
}

TEST(InitialData, UntouchedAwayFromWalls) {
  // psi0 and its slope vanish to high order in the collar
  const ChannelGrid g(8, 64);
  const auto psi = field_from_function(g, [](double x, double y) { return std::pow(1 - y * y, 6) * std::cos(x); });
  const auto u0 = velocity_from_stream(psi);
  const auto ua = suitable_family(psi, 0.2);
  const auto d = ua - u0;
  EXPECT_LE(std::sqrt(norm_sq(d.u1) + norm_sq(d.u2)), 1e-3 * std::sqrt(norm_sq(u0.u1)));
  // exact when psi0 is zero
  const auto z = suitable_family(SpectralScalarField(g), 0.2);
  EXPECT_EQ(z.u1.max_abs_coeff(), 0.0);
}

TEST(InitialData, Refusals) {
  const ChannelGrid g(4, 32);
  EXPECT_THROW(suitable_family(base_stream(g, BaseFlow::Shear), 0.01), Unresolved);
  EXPECT_THROW(suitable_family(base_stream(g, BaseFlow::Shear), 0.0), InvalidArgument);
  const auto bad = field_from_function(g, [](double, double y) { return 1 + y; });
  EXPECT_THROW(suitable_family(bad, 0.2), InvalidArgument);
}

TEST(InitialData, SuitableScalings) {
  const std::vector<double> alphas = {0.2, 0.1, 0.05, 0.025};
  std::vector<double> gap, grad, h3;
  for (double a : alphas) {
    const ChannelGrid g(4, resolve_ny(a, 0.0, 0.0));
    const auto psi = base_stream(g, BaseFlow::Shear);
    const auto t = initial_data_terms(suitable_family(psi, a), velocity_from_stream(psi), a);
    gap.push_back(t.l2_gap);
    grad.push_back(t.grad_term);
    h3.push_back(t.h3_term);
  }
  EXPECT_NEAR(log_log_fit(alphas, gap).slope, 0.5, 0.1);
  EXPECT_NEAR(log_log_fit(alphas, grad).slope, 1.0, 0.15);
  EXPECT_GE(log_log_fit(alphas, h3).slope, -0.15);
  EXPECT_LE(*std::max_element(h3.begin(), h3.end()), 2.0 * h3.front());
}

TEST(Reference, ShearIsExactAndSteady) {
  const auto ref = reference_solution(BaseFlow::Shear, StepControl{});
  EXPECT_TRUE(ref.exact);
  EXPECT_EQ(ref.self_convergence_gap, 0.0);
  const ChannelGrid g(4, 32);
  EXPECT_EQ((ref.velocity_at(0.0, g).u1 - ref.velocity_at(0.7, g).u1).max_abs_coeff(), 0.0);
}

TEST(Reference, PerturbedShearSelfConverges) {
  StepControl c;
  c.dt = 5e-3;
  c.t_end = 0.5;
  c.record_every = 10;
  const auto ref = reference_solution(BaseFlow::PerturbedShear, c, 16, 32);
  EXPECT_FALSE(ref.exact);
  EXPECT_LE(ref.self_convergence_gap, 1e-6);
  EXPECT_GT(ref.fine->snapshots.size(), 2u);
  const auto n = ref.norms();
  for (double v : n) EXPECT_NEAR(v, n.front(), 1e-8 * n.front());
  const ChannelGrid g(16, 32);
  EXPECT_THROW(ref.velocity_at(0.123, g), InvalidArgument);
  // the perturbation actually moves
  const auto d = ref.velocity_at(0.5, g) - ref.velocity_at(0.0, g);
  EXPECT_GT(std::sqrt(norm_sq(d.u2)), 1e-4);
}

TEST(Sweep, ZeroBaseFlow) {
  SweepPlan p = short_plan(2.0);
  p.alphas = {0.1};
  p.base_flow = BaseFlow::Zero;
  const auto rows = run_sweep(p);
  ASSERT_EQ(rows.size(), 1u);
  ASSERT_TRUE(rows[0].ok()) << *rows[0].failure;
  EXPECT_EQ(rows[0].sup_err, 0.0);
  EXPECT_EQ(rows[0].kato_value, 0.0);
}

TEST(Sweep, RegionFourShortHorizon) {
  const auto rows = run_sweep(short_plan(2.0));
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& r : rows) {
    ASSERT_TRUE(r.ok()) << *r.failure;
    EXPECT_EQ(r.region, "boundary III/IV");
    EXPECT_DOUBLE_EQ(r.delta_used, r.nu);
    for (double v : {r.sup_err, r.kato_value, r.ic_l2_gap, r.ic_grad_term, r.ic_h3_term, r.final_energy_gap})
      EXPECT_GE(v, 0.0);
  }
  EXPECT_TRUE(strictly_decreasing(column(rows, &SweepRow::alpha)));
  EXPECT_TRUE(strictly_decreasing(column(rows, &SweepRow::sup_err)));
  EXPECT_TRUE(strictly_decreasing(column(rows, &SweepRow::sup_alpha_grad)));
  EXPECT_GT(rate_fit(rows).slope, 0.0);
}

TEST(Sweep, RegionThreeCoDecrease) {
  auto p = short_plan(1.2);
  p.strip_rule = StripRule::AlphaCubed;
  const auto rows = run_sweep(p);
  for (const auto& r : rows) ASSERT_TRUE(r.ok()) << *r.failure;
  EXPECT_TRUE(strictly_decreasing(column(rows, &SweepRow::sup_err)));
  EXPECT_TRUE(strictly_decreasing(column(rows, &SweepRow::kato_value)));
}

TEST(Sweep, FailureIsRecordedPerRow) {
  auto p = short_plan(2.0);
  p.alphas = {0.2, 0.1};
  p.strip_rule = StripRule::AlphaCubed;  // delta = 1 on this path
  const auto rows = run_sweep(p);
  ASSERT_EQ(rows.size(), 2u);
  for (const auto& r : rows) {
    ASSERT_FALSE(r.ok());
    EXPECT_NE(r.failure->find("strip width"), std::string::npos);
  }
}

TEST(Sweep, DeterministicAcrossWorkerCounts) {
  auto p = short_plan(2.0);
  p.ctrl.t_end = 0.05;
  p.workers = 1;
  const auto a = run_sweep(p);
  p.workers = 3;
  const auto b = run_sweep(p);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].sup_err, b[i].sup_err);
    EXPECT_EQ(a[i].kato_value, b[i].kato_value);
    EXPECT_EQ(a[i].ic_h3_term, b[i].ic_h3_term);
  }
}

TEST(Sweep, PlanValidation) {
  SweepPlan p;
  p.alphas = {};
  EXPECT_THROW(run_sweep(p), InvalidArgument);
  p.alphas = {0.1, 0.2};
  EXPECT_THROW(run_sweep(p), InvalidArgument);
  p.alphas = {1.5};
  EXPECT_THROW(run_sweep(p), InvalidArgument);
  p.alphas = {0.1};
  p.path_coeff = 0.0;
  EXPECT_THROW(run_sweep(p), InvalidArgument);
  const auto q = plan_from_nus({0.2, 0.1});
  EXPECT_NEAR(q.alphas[1], std::pow(0.1, 1.5), 1e-15);
  EXPECT_NEAR(q.nu_for(q.alphas[1]), 0.1, 1e-14);
}

TEST(RateFit, Synthetic) {
  std::vector<SweepRow> rows;
  for (double a : {0.2, 0.1, 0.05, 0.025}) {
    SweepRow r;
    r.alpha = a;
    r.sup_err = a;
    rows.push_back(r);
  }
  EXPECT_NEAR(rate_fit(rows).slope, 1.0, 1e-12);
  for (auto& r : rows) r.sup_err = std::sqrt(r.alpha);
  const auto f = rate_fit(rows);
  EXPECT_NEAR(f.slope, 0.5, 1e-12);
  EXPECT_NEAR(f.slope_ci95, 0.0, 1e-10);
  rows[0].failure = "x";
  rows[1].sup_err = 0.0;
  EXPECT_THROW(rate_fit(rows), InvalidArgument);
}

TEST(RateFit, IntervalCoversNoisySlope) {
  std::vector<SweepRow> rows;
  const double noise[] = {1.05, 0.97, 1.02, 0.99, 1.01};
  int i = 0;
  for (double a : {0.2, 0.1, 0.05, 0.025, 0.0125}) {
    SweepRow r;
    r.alpha = a;
    r.sup_err = std::pow(a, 0.7) * noise[i++];
    rows.push_back(r);
  }
  const auto f = rate_fit(rows);
  EXPECT_GT(f.slope_ci95, 0.0);
  EXPECT_LE(std::abs(f.slope - 0.7), f.slope_ci95);
  (void)pi;
}
