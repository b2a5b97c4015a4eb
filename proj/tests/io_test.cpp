#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sgf/io/cli.hpp"

using namespace sgf;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto d = fs::temp_directory_path() / "sgf_io_test";
  fs::create_directories(d);
  return d / name;
}

std::string config_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

VelocityField noslip(const ChannelGrid& g) { return velocity_from_stream(base_stream(g, BaseFlow::SmoothNoSlip)); }

}  // namespace

TEST(Config, MinimalEuler) {
  const auto c = parse_config("branch = euler\n");
  EXPECT_EQ(c.branch.kind, ModelKind::Euler);
  EXPECT_EQ(c.branch.alpha, 0.0);
  EXPECT_EQ(c.branch.nu, 0.0);
  EXPECT_EQ(c.nx, 16);
  EXPECT_EQ(c.ny, 64);
  EXPECT_EQ(c.ctrl.t_end, 1.0);
  EXPECT_EQ(c.ctrl.cfl_target, 0.5);
  EXPECT_FALSE(c.regime.has_value());
}

TEST(Config, AutoClassifiesAndFlagsRegime) {
  const auto c = parse_config("alpha = 0.01\nnu = 1e-4\n");
  EXPECT_EQ(c.branch.kind, ModelKind::SecondGrade);
  ASSERT_TRUE(c.regime.has_value());
  EXPECT_TRUE(c.regime->on_boundary());
  EXPECT_EQ(c.regime->label(), "boundary III/IV");
}

TEST(Config, NegativeAlpha) {
  EXPECT_EQ(config_error("alpha = -1\n"), "alpha must be ≥ 0");
  EXPECT_EQ(config_error("nu = -0.5\n"), "nu must be ≥ 0");
}

TEST(Config, SyntaxErrorsCarryPosition) {
  EXPECT_EQ(config_error("[model]\nalpha = 0.1\n  bogus = 3\n"), "line 3, column 3: unknown key 'bogus' in section [model]");
  EXPECT_EQ(config_error("alpha = 0.1x\n"), "line 1, column 9: alpha: expected a number, got '0.1x'");
  EXPECT_EQ(config_error("[grid]\nnx = 1.5\n"), "line 2, column 6: nx: expected an integer, got '1.5'");
  EXPECT_EQ(config_error("alpha 0.1\n"), "line 1, column 1: expected 'key = value'");
  EXPECT_EQ(config_error("[model\n"), "line 1, column 1: unterminated section header");
  EXPECT_EQ(config_error("\n\n[physics]\n"), "line 3, column 2: unknown section 'physics'");
  EXPECT_EQ(config_error("alpha = 0.1\nalpha = 0.2\n"), "line 2, column 1: duplicate key 'alpha'");
  EXPECT_EQ(config_error("alpha =\n"), "line 1, column 8: missing value for 'alpha'");
  EXPECT_EQ(config_error("[grid]\nalpha = 0.1\n"), "line 2, column 1: unknown key 'alpha' in section [grid]");
}

TEST(Config, ValidationErrors) {
  EXPECT_NE(config_error("branch = navier_stokes\nalpha = 0.1\nnu = 0.1\n").find("alpha = 0 and nu > 0"), std::string::npos);
  EXPECT_NE(config_error("branch = stokes\n").find("unknown branch"), std::string::npos);
  EXPECT_EQ(config_error("nx = 7\n"), "nx must be even and ≥ 4");
  EXPECT_EQ(config_error("dt = 0\n"), "dt must be > 0");
  EXPECT_EQ(config_error("cfl_target = 2\n"), "cfl_target must lie in (0, 1]");
  EXPECT_NE(config_error("alpha = 0.1\nnu = 0.01\nrule = alpha_cubed\n").find("strip width"), std::string::npos);
  EXPECT_NE(config_error("alpha = 0.1\nnu = 0.01\nbase_flow = shear\n").find("suitable"), std::string::npos);
  EXPECT_NE(config_error("alpha = 0.01\nnu = 0.01\nbase_flow = shear\nsuitable = true\nny = 32\n").find("collar"),
            std::string::npos);
  EXPECT_NE(config_error("suitable = true\n").find("alpha > 0"), std::string::npos);
  EXPECT_NO_THROW(parse_config("base_flow = shear\n"));
  EXPECT_NO_THROW(parse_config("alpha = 0.05\nnu = 0.0025\nbase_flow = shear\nsuitable = true\nny = auto\n"));
}

TEST(Config, SectionsCommentsAndOverrides) {
  const std::string doc =
      "# channel run\n[model]\nalpha = 0.1 ; regularization\nnu = 0.01\n\n[grid]\nnx = 8\nny = 24\n"
      "[time]\ndt = 2e-3\nt_end = 0.5\nrecord_every = 5\n[output]\nseed = 42\n";
  const auto c = parse_config(doc, {"nu=0.02", "time.t_end=0.25"});
  EXPECT_EQ(c.branch.nu, 0.02);
  EXPECT_EQ(c.ctrl.t_end, 0.25);
  EXPECT_EQ(c.nx, 8);
  EXPECT_EQ(c.ny, 24);
  EXPECT_EQ(c.ctrl.record_every, 5);
  EXPECT_EQ(c.seed, 42u);
  try {
    parse_config(doc, {"grid.alpha=1"});
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("override 'grid.alpha=1'"), std::string::npos);
  }
}

TEST(Config, TextRoundTrip) {
  const auto c = parse_config("alpha = 0.1\nnu = 0.01\nnx = 8\nny = auto\ndt = 0.0025\nrule = alpha_cubed\nc = 0.5\n");
  const auto d = parse_config(to_config_text(c));
  EXPECT_EQ(to_config_text(c), to_config_text(d));
  EXPECT_EQ(d.strip_rule, StripRule::AlphaCubed);
  EXPECT_EQ(d.ny, 0);
  EXPECT_GE(d.resolved_ny(), 64);
}

TEST(Config, OutputDirFromEnvironment) {
  ::setenv("SGF_OUTPUT_DIR", "/tmp/elsewhere", 1);
  const auto c = parse_config("dir = results\n");
  ::unsetenv("SGF_OUTPUT_DIR");
  EXPECT_EQ(c.output_dir, "/tmp/elsewhere");
  EXPECT_EQ(parse_config("dir = results\n").output_dir, "results");
}

TEST(Csv, SingleZeroRecord) {
  DiagnosticsRecord r;
  r.err_vs_ref_l2 = 0.0;
  EXPECT_EQ(timeseries_csv({r}), "# sgf timeseries schema 1\n" + std::string(timeseries_header) + "\n0,0,0,0,0,0,0\n");
}

TEST(Csv, TimeseriesRoundTrip) {
  const ChannelGrid g(16, 32);
  Probes p;
  p.strip_deltas = {0.1};
  p.reference = [&](double) { return VelocityField(g); };
  StepControl c{2e-3, 0.1, 0.5, 5};
  const auto tr = run(noslip(g), ModelBranch(0.1, 0.01), c, p);
  const auto text = timeseries_csv(tr.records);
  std::istringstream in(text);
  const auto back = read_timeseries(in);
  ASSERT_EQ(back.size(), tr.records.size());
  for (std::size_t i = 0; i < back.size(); ++i) EXPECT_EQ(back[i], tr.records[i]);
  EXPECT_EQ(timeseries_csv(back), text);
  EXPECT_EQ(text.back(), '\n');
}

TEST(Csv, OptionalErrorColumn) {
  DiagnosticsRecord r;
  r.t = 0.1;
  r.energy_alpha = 1.0 / 3.0;
  const auto text = timeseries_csv({r});
  EXPECT_NE(text.find("0.1,0.3333333333333333,0,0,0,0,\n"), std::string::npos);
  std::istringstream in(text);
  EXPECT_FALSE(read_timeseries(in)[0].err_vs_ref_l2.has_value());
}

TEST(Csv, SweepOrderAndRoundTrip) {
  std::vector<SweepRow> rows;
  for (double a : {0.2, 0.1, 0.05, 0.025}) {
    SweepRow r;
    r.alpha = a;
    r.nu = a * a;
    r.region = classify_regime(a, a * a).label();
    r.delta_used = a * a;
    r.sup_err = std::sqrt(a);
    r.kato_value = a * 1e-3;
    r.ic_l2_gap = 0.1 * a;
    r.ic_grad_term = a;
    r.ic_h3_term = 3.0;
    rows.push_back(r);
  }
  const auto text = sweep_csv(rows);
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "# sgf sweep schema 1");
  std::getline(in, line);
  EXPECT_EQ(line, sweep_header);
  for (double a : {0.2, 0.1, 0.05, 0.025}) {
    std::getline(in, line);
    EXPECT_EQ(line.substr(0, line.find(',')), format_double(a));
  }
  std::istringstream again(text);
  const auto back = read_sweep(again);
  ASSERT_EQ(back.size(), 4u);
  EXPECT_EQ(back[3].region, "boundary III/IV");
  EXPECT_EQ(back[2].sup_err, rows[2].sup_err);
  EXPECT_EQ(sweep_csv(back), text);
}

TEST(Csv, FailedRowsAndErrors) {
  SweepRow r;
  r.alpha = 0.1;
  r.nu = 0.01;
  r.region = "boundary III/IV";
  r.failure = "boom";
  const auto text = sweep_csv({r});
  EXPECT_NE(text.find("0.1,0.01,boundary III/IV,nan,nan"), std::string::npos);
  std::istringstream in(text);
  const auto back = read_sweep(in);
  EXPECT_FALSE(back[0].ok());
  EXPECT_EQ(sweep_csv(back), text);

  EXPECT_THROW(timeseries_csv({}), InvalidArgument);
  EXPECT_THROW(sweep_csv({}), InvalidArgument);
  std::istringstream wrong("# sgf timeseries schema 0\n");
  EXPECT_THROW(read_timeseries(wrong), InvalidArgument);
  std::ostringstream broken;
  broken.setstate(std::ios::badbit);
  EXPECT_THROW(write_timeseries({DiagnosticsRecord{}}, broken), Error);
}

TEST(Csv, ShortestRoundTripFormatting) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, -0.0, 123456789.0}) {
    const auto s = format_double(v);
    EXPECT_EQ(parse_double(s), v);
    EXPECT_EQ(std::signbit(parse_double(s)), std::signbit(v));
  }
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1e-7), "1e-07");
}

TEST(Snapshot, RoundTripIsBitExact) {
  const ChannelGrid g(16, 32);
  const ModelBranch b(0.1, 0.01);
  StepControl c{2e-3, 0.02, 0.5, 5};
  const auto s = *run(noslip(g), b, c).final_state;
  const auto path = scratch("rt.snap");
  save_snapshot(s, b, path);
  const auto back = load_snapshot(path);
  EXPECT_EQ(back.branch.kind, b.kind);
  EXPECT_EQ(back.branch.alpha, b.alpha);
  EXPECT_EQ(back.state.t, s.t);
  ASSERT_EQ(back.state.q.coeffs().size(), s.q.coeffs().size());
  for (std::size_t i = 0; i < s.q.coeffs().size(); ++i) EXPECT_EQ(back.state.q.coeffs()[i], s.q.coeffs()[i]);
  EXPECT_EQ(back.state.mean_momentum, s.mean_momentum);
  EXPECT_LE((back.state.u.u1 - s.u.u1).max_abs_coeff(), 1e-14);
  EXPECT_LE((back.state.u.u2 - s.u.u2).max_abs_coeff(), 1e-14);
  EXPECT_EQ(encode_snapshot(back.state, back.branch), encode_snapshot(s, b));
}

TEST(Snapshot, GridMismatch) {
  const ChannelGrid g(8, 24);
  const ModelBranch b(0.2, 0.0);
  const auto path = scratch("grid.snap");
  save_snapshot(initial_state(noslip(g), b), b, path);
  EXPECT_NO_THROW(load_snapshot(path, ChannelGrid(8, 24)));
  EXPECT_THROW(load_snapshot(path, ChannelGrid(8, 32)), GridMismatch);
}

TEST(Snapshot, CorruptionDetected) {
  const ChannelGrid g(8, 16);
  const ModelBranch b(0.2, 0.04);
  const auto good = encode_snapshot(initial_state(noslip(g), b), b);

  auto flipped = good;
  flipped[good.size() / 2] ^= 0x01;
  EXPECT_THROW(decode_snapshot(flipped), Error);

  auto magic = good;
  magic[0] = 'X';
  EXPECT_THROW(decode_snapshot(magic), Error);

  auto truncated = good;
  truncated.resize(40);
  EXPECT_THROW(decode_snapshot(truncated), Error);

  // version 2 with a consistent checksum
  auto v2 = good;
  v2[8] = 2;
  v2.resize(v2.size() - 8);
  const auto h = detail::fnv1a(v2, v2.size());
  for (int i = 0; i < 8; ++i) v2.push_back(static_cast<unsigned char>(h >> (8 * i)));
  try {
    decode_snapshot(v2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("version"), std::string::npos);
  }
  EXPECT_THROW(load_snapshot(scratch("missing.snap")), Error);
}

TEST(Snapshot, RestartEquivalence) {
  const ChannelGrid g(16, 48);
  const ModelBranch b(0.1, 0.01);
  StepControl full{2e-3, 1.0, 0.5, 50};
  const auto whole = run(noslip(g), b, full);
  StepControl half = full;
  half.t_end = 0.5;
  const auto first = run(noslip(g), b, half);
  const auto path = scratch("restart.snap");
  save_snapshot(*first.final_state, b, path);
  const auto resumed = run(load_snapshot(path, g).state, b, full);
  const auto d = whole.final_state->q - resumed.final_state->q;
  EXPECT_LE(d.max_abs_coeff(), 1e-12 * whole.final_state->q.max_abs_coeff());
  EXPECT_EQ(resumed.final_state->t, 1.0);
  EXPECT_EQ(resumed.last().energy_alpha, whole.last().energy_alpha);
}

TEST(Determinism, IdenticalRunsGiveIdenticalCsv) {
  const ChannelGrid g(16, 32);
  StepControl c{2e-3, 0.1, 0.5, 5};
  Probes p;
  p.strip_deltas = {0.05};
  const auto a = timeseries_csv(run(noslip(g), ModelBranch(0.1, 0.01), c, p).records);
  const auto b = timeseries_csv(run(noslip(g), ModelBranch(0.1, 0.01), c, p).records);
  EXPECT_EQ(a, b);
}

TEST(Cli, DispatchInProcess) {
  std::ostringstream out, err;
  const char* argv[] = {"sgf", "classify", "--alpha", "0.01", "--nu", "0.0001"};
  EXPECT_EQ(cli_dispatch(6, argv, out, err), 0);
  EXPECT_EQ(out.str(), "boundary III/IV\n");

  std::ostringstream o2, e2;
  const char* bad[] = {"sgf", "classify", "--alpha", "2", "--nu", "0.1"};
  EXPECT_EQ(cli_dispatch(6, bad, o2, e2), 1);
  EXPECT_NE(e2.str().find("alpha must lie in (0, 1)"), std::string::npos);

  std::ostringstream o3, e3;
  const char* none[] = {"sgf"};
  EXPECT_NE(cli_dispatch(1, none, o3, e3), 0);
}
