#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "sgf/sgf.hpp"

using namespace sgf;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(4);
  s << v;
  return s.str();
}

std::string list(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + fmt(v[i]);
  return s + "]";
}

int failures = 0;

void criterion(int id, const std::string& name, const std::function<Outcome()>& body, double limit_seconds = 0.0) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit_seconds > 0.0 && secs > limit_seconds) {
    o.pass = false;
    o.detail += "; over the " + fmt(limit_seconds) + " s limit";
  }
  if (!o.pass) ++failures;
  std::cout << (o.pass ? "PASS" : "FAIL") << " [" << id << "] " << name << ": " << o.detail << " (" << fmt(secs)
            << " s)" << std::endl;
}

std::vector<double> column(const std::vector<SweepRow>& rows, double SweepRow::*m) {
  std::vector<double> v;
  for (const auto& r : rows) v.push_back(r.*m);
  return v;
}

bool all_ok(const std::vector<SweepRow>& rows, std::string& why) {
  for (const auto& r : rows)
    if (!r.ok()) {
      why = "row alpha=" + fmt(r.alpha) + " failed: " + *r.failure;
      return false;
    }
  return true;
}

int cli(const std::string& args) {
  const int st = std::system((std::string(SGF_CLI_PATH) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

VelocityField smooth_noslip(const ChannelGrid& g) {
  return velocity_from_stream(base_stream(g, BaseFlow::SmoothNoSlip));
}

}  // namespace

int main() {
  criterion(1, "oracle suite", [] {
    Outcome o{true, ""};
    double total = 0.0;
    for (const auto& r : run_oracle_suite()) {
      o.pass = o.pass && r.pass();
      o.detail += (o.detail.empty() ? "" : "; ") + r.name + " err " + fmt(r.error) + " <= " + fmt(r.tolerance);
      total += r.seconds;
    }
    o.pass = o.pass && total <= 60.0;
    return o;
  }, 60.0);

  const ChannelGrid g64(64, 64);
  const StepControl ctrl{2e-3, 1.0, 0.5, 25};
  Trajectory viscous;

  criterion(2, "energy identity", [&] {
    viscous = run(smooth_noslip(g64), ModelBranch(0.1, 0.01), ctrl);
    const double res = energy_balance_residual(viscous);
    const auto inviscid = run(smooth_noslip(g64), ModelBranch(0.1, 0.0), ctrl);
    const double drift = energy_balance_residual(inviscid);
    return Outcome{res <= 1e-6 && drift <= 1e-8,
                   "second grade alpha=0.1 nu=0.01 64x64 T=1 residual " + fmt(res) + " <= 1e-6; nu=0 drift " +
                       fmt(drift) + " <= 1e-8"};
  });

  criterion(3, "q bound", [&] {
    if (viscous.records.empty()) return Outcome{false, "no trajectory from criterion 2"};
    const double m = q_bound_check(viscous);
    return Outcome{m >= 0.0, "minimum margin " + fmt(m) + " over " + std::to_string(viscous.records.size()) + " samples"};
  });

  criterion(4, "region IV convergence", [] {
    SweepPlan p;
    p.path_exponent = 2.0;
    p.strip_rule = StripRule::NuLinear;
    const auto rows = run_sweep(p);
    std::string why;
    if (!all_ok(rows, why)) return Outcome{false, why};
    const auto sup = column(rows, &SweepRow::sup_err);
    const auto f = rate_fit(rows);
    return Outcome{strictly_decreasing(sup) && f.slope > 0.0,
                   "sup_err " + list(sup) + ", slope " + fmt(f.slope) + " +- " + fmt(f.slope_ci95)};
  }, 600.0);

  criterion(5, "region III co-vanishing", [] {
    SweepPlan p;
    p.path_exponent = 1.2;
    p.strip_rule = StripRule::AlphaCubed;
    p.strip_coeff = 1.0;
    const auto rows = run_sweep(p);
    std::string why;
    if (!all_ok(rows, why)) return Outcome{false, why};
    const auto sup = column(rows, &SweepRow::sup_err);
    const auto kato = column(rows, &SweepRow::kato_value);
    return Outcome{strictly_decreasing(sup) && strictly_decreasing(kato), "sup_err " + list(sup) + ", kato " + list(kato)};
  });

  criterion(6, "region I strip rule", [] {
    const auto rows = run_sweep(plan_from_nus({0.2, 0.1, 0.05, 0.025}));
    std::string why;
    if (!all_ok(rows, why)) return Outcome{false, why};
    const auto sup = column(rows, &SweepRow::sup_err);
    const auto kato = column(rows, &SweepRow::kato_value);
    return Outcome{strictly_decreasing(sup) && strictly_decreasing(kato), "sup_err " + list(sup) + ", kato " + list(kato)};
  });

  criterion(7, "corrector scalings", [] {
    const ChannelGrid g(16, 256);
    const auto f = corrector_scaling_fit(base_stream(g, BaseFlow::PerturbedShear), {0.2, 0.1, 0.05, 0.025});
    return Outcome{f.p0 >= 0.4 && f.p0 <= 0.6 && f.p1 >= -0.6 && f.p1 <= -0.4,
                   "||u_b|| exponent " + fmt(f.p0) + " in [0.4,0.6], ||grad u_b|| exponent " + fmt(f.p1) +
                       " in [-0.6,-0.4]"};
  });

  criterion(8, "suitable initial data", [] {
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
    const double s0 = log_log_fit(alphas, gap).slope;
    const double s1 = log_log_fit(alphas, grad).slope;
    const double s3 = log_log_fit(alphas, h3).slope;
    const bool ok = std::abs(s0 - 0.5) <= 0.1 && std::abs(s1 - 1.0) <= 0.15 && s3 >= -0.15;
    return Outcome{ok, "L2 gap exponent " + fmt(s0) + ", alpha^2 grad^2 exponent " + fmt(s1) + ", alpha^3 H3 " +
                           list(h3) + " (exponent " + fmt(s3) + ")"};
  });

  criterion(9, "inequality bench", [] {
    const ChannelGrid g(16, 48);
    const auto a = inequality_bench(random_stream_corpus(g, 100, 7));
    const auto b = inequality_bench(random_stream_corpus(g, 200, 7));
    auto stable = [](double x, double y) { return std::isfinite(x) && std::isfinite(y) && std::abs(y - x) <= 0.1 * x; };
    const bool ok = a.skew_residual <= 1e-10 && a.curl_grad_residual <= 1e-10 && stable(a.ladyzhenskaya, b.ladyzhenskaya) &&
                    stable(a.interpolation, b.interpolation) && stable(a.h3_curl, b.h3_curl) &&
                    stable(a.poincare, b.poincare);
    return Outcome{ok, "identities " + fmt(a.skew_residual) + ", " + fmt(a.curl_grad_residual) + "; constants 100 vs 200: " +
                           fmt(a.ladyzhenskaya) + "/" + fmt(b.ladyzhenskaya) + ", " + fmt(a.interpolation) + "/" +
                           fmt(b.interpolation) + ", " + fmt(a.h3_curl) + "/" + fmt(b.h3_curl) + ", " + fmt(a.poincare) +
                           "/" + fmt(b.poincare)};
  });

  criterion(10, "determinism and restart", [] {
    const auto d = fs::temp_directory_path() / "sgf_acceptance";
    fs::create_directories(d);
    const auto cfg = d / "run.ini";
    std::ofstream(cfg) << "[model]\nalpha = 0.1\nnu = 0.01\n[grid]\nnx = 16\nny = 48\n[time]\ndt = 2e-3\nt_end = 0.5\n"
                          "record_every = 10\n[output]\nseed = 1\n";
    const auto a = d / "a.csv", b = d / "b.csv";
    const bool ran = cli("run -c " + cfg.string() + " -o " + a.string()) == 0 &&
                     cli("run -c " + cfg.string() + " -o " + b.string()) == 0;
    const bool same = ran && slurp(a) == slurp(b) && !slurp(a).empty();

    const ChannelGrid g(16, 48);
    const ModelBranch br(0.1, 0.01);
    const StepControl full{2e-3, 1.0, 0.5, 50};
    StepControl half = full;
    half.t_end = 0.5;
    const auto whole = run(smooth_noslip(g), br, full);
    const auto first = run(smooth_noslip(g), br, half);
    const auto snap = d / "half.snap";
    save_snapshot(*first.final_state, br, snap);
    const auto resumed = run(load_snapshot(snap, g).state, br, full);
    const double gap = (whole.final_state->q - resumed.final_state->q).max_abs_coeff() /
                       whole.final_state->q.max_abs_coeff();
    return Outcome{same && gap <= 1e-12,
                   std::string("CSVs ") + (same ? "byte-identical" : "differ") + "; restart gap " + fmt(gap) + " <= 1e-12"};
  });

  std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria fail") << std::endl;
  return failures == 0 ? 0 : 1;
}
