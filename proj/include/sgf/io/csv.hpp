#pragma once

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "sgf/diagnostics/record.hpp"
#include "sgf/experiments/sweep.hpp"

namespace sgf {

/// Bumped on any change of columns or formatting.
inline constexpr int csv_schema_version = 1;

inline constexpr std::string_view timeseries_header =
    "t,energy_alpha,grad_sq,q_norm_sq,cum_dissipation,strip_dissipation,err_vs_ref_l2";
inline constexpr std::string_view sweep_header =
    "alpha,nu,region,delta_used,sup_err,kato_value,ic_l2_gap,ic_grad_term,ic_h3_term";

/// Shortest decimal that parses back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

inline double parse_double(std::string_view s) {
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size())
    throw InvalidArgument("bad number '" + std::string(s) + "' in CSV");
  return v;
}

namespace detail {

inline std::string schema_line(std::string_view kind) {
  return "# sgf " + std::string(kind) + " schema " + std::to_string(csv_schema_version);
}

inline void put_sink(std::ostream& out, const std::string& s) {
  out << s;
  out.flush();
  if (!out) throw Error("CSV sink write failed");
}

inline std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t b = 0;
  while (true) {
    const auto c = line.find(',', b);
    out.push_back(line.substr(b, c == std::string_view::npos ? std::string_view::npos : c - b));
    if (c == std::string_view::npos) break;
    b = c + 1;
  }
  return out;
}

inline std::vector<std::string> read_body(std::istream& in, std::string_view kind, std::string_view header) {
  std::string line;
  if (!std::getline(in, line) || line != schema_line(kind))
    throw InvalidArgument("CSV schema mismatch: expected '" + schema_line(kind) + "'");
  if (!std::getline(in, line) || line != header) throw InvalidArgument("CSV header mismatch");
  std::vector<std::string> rows;
  while (std::getline(in, line))
    if (!line.empty()) rows.push_back(line);
  return rows;
}

}  // namespace detail

inline void write_timeseries(const std::vector<DiagnosticsRecord>& records, std::ostream& out) {
  if (records.empty()) throw InvalidArgument("no records to write");
  std::string s = detail::schema_line("timeseries") + "\n" + std::string(timeseries_header) + "\n";
  for (const auto& r : records) {
    s += format_double(r.t) + ',' + format_double(r.energy_alpha) + ',' + format_double(r.grad_sq) + ',' +
         format_double(r.q_norm_sq) + ',' + format_double(r.cum_dissipation) + ',' + format_double(r.strip_dissipation) +
         ',' + (r.err_vs_ref_l2 ? format_double(*r.err_vs_ref_l2) : std::string()) + '\n';
  }
  detail::put_sink(out, s);
}

inline std::vector<DiagnosticsRecord> read_timeseries(std::istream& in) {
  std::vector<DiagnosticsRecord> out;
  for (const auto& line : detail::read_body(in, "timeseries", timeseries_header)) {
    const auto f = detail::split(line);
    if (f.size() != 7) throw InvalidArgument("timeseries row has " + std::to_string(f.size()) + " fields");
    DiagnosticsRecord r;
    r.t = parse_double(f[0]);
    r.energy_alpha = parse_double(f[1]);
    r.grad_sq = parse_double(f[2]);
    r.q_norm_sq = parse_double(f[3]);
    r.cum_dissipation = parse_double(f[4]);
    r.strip_dissipation = parse_double(f[5]);
    if (!f[6].empty()) r.err_vs_ref_l2 = parse_double(f[6]);
    out.push_back(r);
  }
  return out;
}

/// Failed rows keep alpha, nu and region; measured columns are written as nan.
inline void write_sweep(const std::vector<SweepRow>& rows, std::ostream& out) {
  if (rows.empty()) throw InvalidArgument("no rows to write");
  std::string s = detail::schema_line("sweep") + "\n" + std::string(sweep_header) + "\n";
  for (const auto& r : rows) {
    auto v = [&](double x) { return format_double(r.ok() ? x : std::numeric_limits<double>::quiet_NaN()); };
    s += format_double(r.alpha) + ',' + format_double(r.nu) + ',' + r.region + ',' + v(r.delta_used) + ',' +
         v(r.sup_err) + ',' + v(r.kato_value) + ',' + v(r.ic_l2_gap) + ',' + v(r.ic_grad_term) + ',' + v(r.ic_h3_term) +
         '\n';
  }
  detail::put_sink(out, s);
}

inline std::vector<SweepRow> read_sweep(std::istream& in) {
  std::vector<SweepRow> out;
  for (const auto& line : detail::read_body(in, "sweep", sweep_header)) {
    const auto f = detail::split(line);
    if (f.size() != 9) throw InvalidArgument("sweep row has " + std::to_string(f.size()) + " fields");
    SweepRow r;
    r.alpha = parse_double(f[0]);
    r.nu = parse_double(f[1]);
    r.region = std::string(f[2]);
    r.delta_used = parse_double(f[3]);
    r.sup_err = parse_double(f[4]);
    r.kato_value = parse_double(f[5]);
    r.ic_l2_gap = parse_double(f[6]);
    r.ic_grad_term = parse_double(f[7]);
    r.ic_h3_term = parse_double(f[8]);
    if (std::isnan(r.sup_err)) r.failure = "failed";
    out.push_back(r);
  }
  return out;
}

inline std::string timeseries_csv(const std::vector<DiagnosticsRecord>& records) {
  std::ostringstream o;
  write_timeseries(records, o);
  return o.str();
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream o;
  write_sweep(rows, o);
  return o.str();
}

}  // namespace sgf
