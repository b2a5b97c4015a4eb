#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "sgf/io/csv.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result sgf_cli(const std::string& args) {
  const std::string cmd = std::string(SGF_CLI_PATH) + " " + args + " 2>&1";
  Result r;
  FILE* p = ::popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int st = ::pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

fs::path dir() {
  const auto d = fs::temp_directory_path() / "sgf_cli_test";
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST(CliProcess, Classify) {
  auto r = sgf_cli("classify --alpha 0.01 --nu 0.0001");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "boundary III/IV\n");
  r = sgf_cli("classify --alpha 0.01 --nu 0.001");
  EXPECT_EQ(r.out, "III\n");
  r = sgf_cli("classify --alpha 0.001 --nu 0.1");
  EXPECT_EQ(r.out, "I\n");
}

TEST(CliProcess, UsageErrors) {
  EXPECT_NE(sgf_cli("").code, 0);
  EXPECT_NE(sgf_cli("frobnicate").code, 0);
  EXPECT_NE(sgf_cli("classify --alpha 0.1").code, 0);
}

TEST(CliProcess, OracleCheck) {
  const auto r = sgf_cli("oracle-check");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}

TEST(CliProcess, RunAtTimeZeroWritesOneRow) {
  const auto cfg = dir() / "zero.ini";
  const auto csv = dir() / "zero.csv";
  write(cfg, "[model]\nalpha = 0.1\nnu = 0.01\n[grid]\nnx = 8\nny = 32\n[time]\nt_end = 0\n");
  const auto r = sgf_cli("run -c " + cfg.string() + " -o " + csv.string());
  ASSERT_EQ(r.code, 0) << r.out;
  std::ifstream in(csv);
  const auto rows = sgf::read_timeseries(in);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].t, 0.0);
  EXPECT_GT(rows[0].energy_alpha, 0.0);
}

TEST(CliProcess, BadConfigFails) {
  const auto cfg = dir() / "bad.ini";
  write(cfg, "[model]\nalpha = -1\n");
  auto r = sgf_cli("run -c " + cfg.string() + " -o " + (dir() / "bad.csv").string());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("alpha must be ≥ 0"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir() / "bad.csv"));

  write(cfg, "[model]\nalpha = 0.1\n[grid]\nnz = 3\n");
  r = sgf_cli("run -c " + cfg.string());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("line 4, column 1"), std::string::npos);

  r = sgf_cli("run -c " + (dir() / "nope.ini").string());
  EXPECT_EQ(r.code, 1);
}

TEST(CliProcess, RepeatedRunsAreByteIdentical) {
  const auto cfg = dir() / "det.ini";
  write(cfg, "alpha = 0.1\nnu = 0.01\nnx = 16\nny = 32\ndt = 2e-3\nt_end = 0.1\nrecord_every = 5\n");
  const auto a = dir() / "det_a.csv", b = dir() / "det_b.csv";
  ASSERT_EQ(sgf_cli("run -c " + cfg.string() + " -o " + a.string()).code, 0);
  ASSERT_EQ(sgf_cli("run -c " + cfg.string() + " -o " + b.string()).code, 0);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_GT(slurp(a).size(), 100u);
}

TEST(CliProcess, RestartMatchesUninterrupted) {
  const auto cfg = dir() / "rs.ini";
  write(cfg, "alpha = 0.1\nnu = 0.01\nnx = 16\nny = 32\ndt = 2e-3\nt_end = 0.4\nrecord_every = 50\n");
  const auto full = dir() / "rs_full.csv", half = dir() / "rs_half.csv", rest = dir() / "rs_rest.csv";
  const auto snap = dir() / "rs.snap";
  ASSERT_EQ(sgf_cli("run -c " + cfg.string() + " -o " + full.string()).code, 0);
  ASSERT_EQ(sgf_cli("run -c " + cfg.string() + " --set t_end=0.2 -o " + half.string() + " --snapshot " + snap.string()).code, 0);
  const auto r = sgf_cli("run -c " + cfg.string() + " --restart " + snap.string() + " -o " + rest.string());
  ASSERT_EQ(r.code, 0) << r.out;
  std::ifstream fa(full), fb(rest);
  const auto x = sgf::read_timeseries(fa);
  const auto y = sgf::read_timeseries(fb);
  EXPECT_EQ(x.back().t, y.back().t);
  EXPECT_NEAR(x.back().energy_alpha, y.back().energy_alpha, 1e-12 * x.back().energy_alpha);
  EXPECT_NEAR(x.back().grad_sq, y.back().grad_sq, 1e-12 * x.back().grad_sq);
}

TEST(CliProcess, RestartOnWrongGridFails) {
  const auto cfg = dir() / "g.ini";
  const auto snap = dir() / "g.snap";
  write(cfg, "alpha = 0.1\nnu = 0.01\nnx = 8\nny = 24\nt_end = 0\n");
  ASSERT_EQ(sgf_cli("run -c " + cfg.string() + " -o " + (dir() / "g.csv").string() + " --snapshot " + snap.string()).code, 0);
  const auto r = sgf_cli("run -c " + cfg.string() + " --set ny=32 --restart " + snap.string() + " -o " +
                         (dir() / "g2.csv").string());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("does not match"), std::string::npos);
}

TEST(CliProcess, SmallSweep) {
  const auto csv = dir() / "sweep.csv";
  const auto r = sgf_cli("sweep --region IV --alphas 0.2,0.1,0.05 --t-end 0.05 --dt 2e-3 -o " + csv.string());
  ASSERT_EQ(r.code, 0) << r.out;
  std::ifstream in(csv);
  const auto rows = sgf::read_sweep(in);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].alpha, 0.2);
  EXPECT_EQ(rows[2].alpha, 0.05);
  for (const auto& row : rows) EXPECT_TRUE(row.ok());
}

TEST(CliProcess, BenchAndCorrector) {
  auto r = sgf_cli("bench-inequalities --count 20");
  EXPECT_EQ(r.code, 0) << r.out;
  r = sgf_cli("corrector-check");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("PASS"), std::string::npos);
}
