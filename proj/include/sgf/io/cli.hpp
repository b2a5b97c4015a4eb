#pragma once

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "sgf/diagnostics/corrector.hpp"
#include "sgf/diagnostics/energy.hpp"
#include "sgf/diagnostics/inequalities.hpp"
#include "sgf/experiments/sweep.hpp"
#include "sgf/io/config.hpp"
#include "sgf/io/csv.hpp"
#include "sgf/io/snapshot.hpp"
#include "sgf/verification/oracle_suite.hpp"

namespace sgf {

/// Initial velocity of a configured run on grid g.
inline VelocityField initial_velocity(const RunConfig& c, const ChannelGrid& g) {
  const auto psi = base_stream(g, c.base_flow, c.base_eps);
  return c.suitable ? suitable_family(psi, c.branch.alpha) : velocity_from_stream(psi);
}

/// Directory for outputs: SGF_OUTPUT_DIR wins over the given default.
inline std::filesystem::path output_dir(const std::string& fallback) {
  if (const char* env = std::getenv("SGF_OUTPUT_DIR"); env && *env) return env;
  return fallback;
}

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  f << text;
  f.close();
  if (!f) throw Error("cannot write " + path.string());
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot read " + path.string());
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

inline int cmd_run(const std::string& config_path, const std::vector<std::string>& sets, std::string csv_path,
                   const std::string& snapshot_out, const std::string& restart, std::ostream& out) {
  const RunConfig cfg = parse_config(config_path.empty() ? std::string() : read_file(config_path), sets);
  const ChannelGrid g(cfg.nx, cfg.resolved_ny(), cfg.lx);
  Probes probes;
  if (auto d = config_strip_delta(cfg)) probes.strip_deltas = {*d};

  FlowState s0 = [&] {
    if (restart.empty()) return initial_state(initial_velocity(cfg, g), cfg.branch);
    auto snap = load_snapshot(restart, g);
    if (!(snap.branch.kind == cfg.branch.kind && snap.branch.alpha == cfg.branch.alpha &&
          snap.branch.nu == cfg.branch.nu))
      throw ConfigError("snapshot branch does not match the configured alpha and nu");
    return std::move(snap.state);
  }();
  if (cfg.ctrl.t_end < s0.t) throw ConfigError("t_end lies before the snapshot time");

  const auto tr = run(s0, cfg.branch, cfg.ctrl, probes);
  if (csv_path.empty()) csv_path = (output_dir(cfg.output_dir) / "timeseries.csv").string();
  write_file(csv_path, timeseries_csv(tr.records));
  if (!snapshot_out.empty()) {
    const std::filesystem::path p(snapshot_out);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    save_snapshot(*tr.final_state, cfg.branch, p);
  }

  out << "branch " << to_string(cfg.branch.kind) << " alpha=" << format_double(cfg.branch.alpha)
      << " nu=" << format_double(cfg.branch.nu);
  if (cfg.regime) out << " region " << cfg.regime->label();
  out << "\ngrid " << g.nx() << "x" << g.ny() << " dt=" << format_double(tr.ctrl.dt) << " steps=" << tr.steps << "\n";
  if (tr.records.size() >= 2 && tr.first().energy_alpha > 0.0) {
    out << "energy balance residual (2 nu convention): " << format_double(energy_balance_residual(tr, 2.0)) << "\n";
    out << "energy balance residual (1 nu convention): " << format_double(energy_balance_residual(tr, 1.0)) << "\n";
  }
  if (cfg.branch.regularized()) out << "q-bound margin: " << format_double(q_bound_check(tr)) << "\n";
  out << "wrote " << csv_path << " (" << tr.records.size() << " rows)\n";
  return 0;
}

struct SweepArgs {
  std::string region = "IV";
  std::vector<double> alphas;
  std::vector<double> nus;
  double beta = 0.0;
  double coeff = 1.0;
  double t_end = 1.0;
  double dt = 1e-3;
  int record_every = 10;
  std::string base_flow = "shear";
  std::string strip_rule;
  double strip_c = 1.0;
  int nx = 4;
  int min_ny = 64;
  int workers = 0;
  std::string output;
};

/// Plan for a named path: IV (nu = alpha^2), III (nu = alpha^(6/5)),
/// I (alpha = nu^(3/2)), II (nu = alpha^(4/5)); beta overrides the exponent.
inline SweepPlan plan_for(const SweepArgs& a) {
  SweepPlan p;
  if (a.region == "I") {
    p = plan_from_nus(a.nus.empty() ? std::vector<double>{0.2, 0.1, 0.05, 0.025} : a.nus);
  } else if (a.region == "II") {
    p.path_exponent = 0.8;
  } else if (a.region == "III") {
    p.path_exponent = 1.2;
    p.strip_rule = StripRule::AlphaCubed;
  } else if (a.region == "IV") {
    p.path_exponent = 2.0;
    p.strip_rule = StripRule::NuLinear;
  } else {
    throw InvalidArgument("unknown region '" + a.region + "' (expected I, II, III or IV)");
  }
  if (a.beta > 0.0) p.path_exponent = a.beta;
  if (!a.alphas.empty()) p.alphas = a.alphas;
  p.path_coeff = a.coeff;
  p.ctrl = StepControl{a.dt, a.t_end, 0.5, a.record_every};
  p.base_flow = base_flow_from_string(a.base_flow);
  if (!a.strip_rule.empty()) p.strip_rule = strip_rule_from_string(a.strip_rule);
  p.strip_coeff = a.strip_c;
  p.nx = a.nx;
  p.min_ny = a.min_ny;
  p.workers = a.workers;
  return p;
}

inline int cmd_sweep(const SweepArgs& a, std::ostream& out, std::ostream& err) {
  const auto plan = plan_for(a);
  const auto rows = run_sweep(plan);
  const std::string path = a.output.empty() ? (output_dir("out") / "sweep.csv").string() : a.output;
  write_file(path, sweep_csv(rows));
  bool ok = true;
  for (const auto& r : rows) {
    out << "alpha=" << format_double(r.alpha) << " nu=" << format_double(r.nu) << " [" << r.region << "]";
    if (r.ok()) {
      out << " ny=" << r.ny << " sup_err=" << format_double(r.sup_err) << " kato=" << format_double(r.kato_value)
          << "\n";
    } else {
      out << " FAILED\n";
      err << "row alpha=" << format_double(r.alpha) << ": " << *r.failure << "\n";
      ok = false;
    }
  }
  try {
    const auto f = rate_fit(rows);
    out << "rate fit: slope " << format_double(f.slope) << " +- " << format_double(f.slope_ci95) << " (95%)\n";
  } catch (const InvalidArgument& e) {
    out << "rate fit: " << e.what() << "\n";
  }
  out << "wrote " << path << " (" << rows.size() << " rows)\n";
  return ok ? 0 : 2;
}

inline int cmd_corrector(int nx, int ny, const std::vector<double>& deltas, const std::string& profile,
                         const std::string& flow, std::ostream& out) {
  const ChannelGrid g(nx, ny);
  const auto prof = profile == "c4" ? CutoffProfile::C4 : profile == "c2" ? CutoffProfile::C2
                                                                          : throw InvalidArgument("profile must be c2 or c4");
  const auto fit = corrector_scaling_fit(base_stream(g, base_flow_from_string(flow)), deltas, prof);
  out << "delta,l2,grad\n";
  for (std::size_t i = 0; i < deltas.size(); ++i)
    out << format_double(deltas[i]) << "," << format_double(fit.norms[i].l2) << "," << format_double(fit.norms[i].grad)
        << "\n";
  const bool ok = fit.p0 >= 0.4 && fit.p0 <= 0.6 && fit.p1 >= -0.6 && fit.p1 <= -0.4;
  out << "p0 = " << format_double(fit.p0) << " (expected 0.5)\np1 = " << format_double(fit.p1) << " (expected -0.5)\n"
      << (ok ? "PASS" : "FAIL") << "\n";
  return ok ? 0 : 1;
}

inline int cmd_bench(int nx, int ny, int count, std::uint64_t seed, std::ostream& out) {
  const ChannelGrid g(nx, ny);
  const auto corpus = random_stream_corpus(g, count, seed);
  const auto rep = inequality_bench(corpus);
  out << "entries " << rep.entries << ", skipped " << rep.skipped << "\n"
      << "skew identity residual        " << format_double(rep.skew_residual) << "\n"
      << "curl/grad identity residual   " << format_double(rep.curl_grad_residual) << "\n"
      << "L4 interpolation constant     " << format_double(rep.ladyzhenskaya) << "\n"
      << "H1 interpolation constant     " << format_double(rep.interpolation) << "\n"
      << "H3 vs Lap curl constant       " << format_double(rep.h3_curl) << "\n"
      << "strip Poincare constant       " << format_double(rep.poincare) << "\n"
      << "strip Poincare slope          " << format_double(rep.poincare_slope) << "\n";
  for (const auto& n : rep.notes) out << "note: " << n << "\n";
  const bool ok = rep.skew_residual <= 1e-10 && rep.curl_grad_residual <= 1e-10 && std::isfinite(rep.ladyzhenskaya) &&
                  std::isfinite(rep.interpolation) && std::isfinite(rep.h3_curl) && std::isfinite(rep.poincare);
  out << (ok ? "PASS" : "FAIL") << "\n";
  return ok ? 0 : 1;
}

inline int cmd_oracle(std::ostream& out) {
  bool ok = true;
  double total = 0.0;
  for (const auto& r : run_oracle_suite()) {
    out << (r.pass() ? "PASS " : "FAIL ") << r.name << ": error " << std::setprecision(3) << r.error << " (tol "
        << r.tolerance << ", " << std::fixed << std::setprecision(2) << r.seconds << " s)\n"
        << std::defaultfloat;
    ok = ok && r.pass();
    total += r.seconds;
  }
  out << "total " << std::fixed << std::setprecision(2) << total << " s\n" << std::defaultfloat;
  return ok ? 0 : 1;
}

}  // namespace detail

/// Entry point of the sgf executable. Returns the process exit status.
inline int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Second-grade fluid channel simulator and diagnostics"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "integrate one trajectory and write its timeseries CSV");
  std::string config_path, csv_path, snapshot_out, restart;
  std::vector<std::string> sets;
  run->add_option("-c,--config", config_path, "configuration file");
  run->add_option("-s,--set", sets, "override, e.g. --set alpha=0.1 (repeatable)");
  run->add_option("-o,--output", csv_path, "timeseries CSV path");
  run->add_option("--snapshot", snapshot_out, "write the final state here");
  run->add_option("--restart", restart, "start from this snapshot");

  auto* sweep = app.add_subcommand("sweep", "run a scaling-path sweep and write the sweep CSV");
  detail::SweepArgs sa;
  sweep->add_option("--region", sa.region, "path preset: I, II, III or IV")->capture_default_str();
  sweep->add_option("--alphas", sa.alphas, "decreasing alphas")->delimiter(',');
  sweep->add_option("--nus", sa.nus, "region I: nus, alpha = nu^(3/2)")->delimiter(',');
  sweep->add_option("--beta", sa.beta, "path exponent, nu = c alpha^beta");
  sweep->add_option("--coeff", sa.coeff, "path coefficient c")->capture_default_str();
  sweep->add_option("--t-end", sa.t_end)->capture_default_str();
  sweep->add_option("--dt", sa.dt)->capture_default_str();
  sweep->add_option("--record-every", sa.record_every)->capture_default_str();
  sweep->add_option("--base-flow", sa.base_flow)->capture_default_str();
  sweep->add_option("--strip-rule", sa.strip_rule, "alpha_cubed or nu_linear");
  sweep->add_option("--strip-c", sa.strip_c)->capture_default_str();
  sweep->add_option("--nx", sa.nx)->capture_default_str();
  sweep->add_option("--min-ny", sa.min_ny)->capture_default_str();
  sweep->add_option("--workers", sa.workers, "0 = hardware concurrency")->capture_default_str();
  sweep->add_option("-o,--output", sa.output, "sweep CSV path");

  auto* classify = app.add_subcommand("classify", "print the region of (alpha, nu)");
  double ca = 0.0, cn = 0.0;
  classify->add_option("--alpha", ca)->required();
  classify->add_option("--nu", cn)->required();

  auto* corr = app.add_subcommand("corrector-check", "boundary-corrector scaling fit");
  int cnx = 8, cny = 256;
  std::vector<double> deltas = {0.2, 0.1, 0.05, 0.025};
  std::string profile = "c2", cflow = "shear";
  corr->add_option("--nx", cnx)->capture_default_str();
  corr->add_option("--ny", cny)->capture_default_str();
  corr->add_option("--deltas", deltas)->delimiter(',');
  corr->add_option("--profile", profile, "c2 or c4")->capture_default_str();
  corr->add_option("--base-flow", cflow)->capture_default_str();

  auto* bench = app.add_subcommand("bench-inequalities", "functional inequalities over a random corpus");
  int bnx = 16, bny = 48, count = 100;
  std::uint64_t seed = 1;
  bench->add_option("--nx", bnx)->capture_default_str();
  bench->add_option("--ny", bny)->capture_default_str();
  bench->add_option("--count", count)->capture_default_str();
  bench->add_option("--seed", seed)->capture_default_str();

  auto* oracle = app.add_subcommand("oracle-check", "compare against closed forms and dense references");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*run) return detail::cmd_run(config_path, sets, csv_path, snapshot_out, restart, out);
    if (*sweep) return detail::cmd_sweep(sa, out, err);
    if (*classify) {
      out << classify_regime(ca, cn).label() << "\n";
      return 0;
    }
    if (*corr) return detail::cmd_corrector(cnx, cny, deltas, profile, cflow, out);
    if (*bench) return detail::cmd_bench(bnx, bny, count, seed, out);
    if (*oracle) return detail::cmd_oracle(out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace sgf
