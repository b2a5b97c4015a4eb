#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "sgf/diagnostics/kato.hpp"
#include "sgf/dynamics/branch.hpp"
#include "sgf/dynamics/state.hpp"
#include "sgf/experiments/initial_data.hpp"
#include "sgf/experiments/regime.hpp"

namespace sgf {

/// Everything one trajectory needs. Filled by parse_config, which validates
/// before any solver state is allocated.
struct RunConfig {
  ModelBranch branch;
  int nx = 16;
  int ny = 64;  // 0 = pick from the resolution ladder
  double lx = 2.0 * std::numbers::pi;
  StepControl ctrl{1e-3, 1.0, 0.5, 10};
  BaseFlow base_flow = BaseFlow::SmoothNoSlip;
  double base_eps = 0.05;
  /// Replace the base flow by its no-slip suitable family at width alpha.
  bool suitable = false;
  StripRule strip_rule = StripRule::NuLinear;
  double strip_c = 1.0;
  std::string output_dir = "out";
  std::uint64_t seed = 1;
  /// Region of (alpha, nu) when both lie in (0, 1).
  std::optional<RegimeRegion> regime;

  /// ny with 0 resolved through the ladder.
  int resolved_ny() const { return ny > 0 ? ny : resolve_ny(branch.alpha, branch.nu, ctrl.t_end); }
};

namespace detail {

struct KeySpec {
  const char* section;
  const char* name;
};

inline const std::vector<KeySpec>& config_keys() {
  static const std::vector<KeySpec> keys = {
      {"model", "branch"},       {"model", "alpha"},      {"model", "nu"},
      {"grid", "nx"},            {"grid", "ny"},          {"grid", "lx"},
      {"time", "dt"},            {"time", "t_end"},       {"time", "cfl_target"},
      {"time", "record_every"},  {"initial", "base_flow"}, {"initial", "eps"},
      {"initial", "suitable"},   {"strip", "rule"},       {"strip", "c"},
      {"output", "dir"},         {"output", "seed"},
  };
  return keys;
}

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Entry {
  std::string value;
  int line = 0;
  int column = 0;  // of the value
  std::string origin;  // empty for document lines
};

[[noreturn]] inline void config_fail(int line, int col, const std::string& what) {
  throw ConfigError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + what);
}

[[noreturn]] inline void entry_fail(const Entry& e, const std::string& what) {
  if (!e.origin.empty()) throw ConfigError(e.origin + ": " + what);
  config_fail(e.line, e.column, what);
}

inline double as_double(const Entry& e, const std::string& key) {
  double v = 0.0;
  const char* b = e.value.data();
  const char* end = b + e.value.size();
  const auto r = std::from_chars(b, end, v);
  if (r.ec != std::errc() || r.ptr != end) entry_fail(e, key + ": expected a number, got '" + e.value + "'");
  return v;
}

inline long long as_int(const Entry& e, const std::string& key) {
  long long v = 0;
  const char* b = e.value.data();
  const char* end = b + e.value.size();
  const auto r = std::from_chars(b, end, v);
  if (r.ec != std::errc() || r.ptr != end)
    entry_fail(e, key + ": expected an integer, got '" + e.value + "'");
  return v;
}

inline bool as_bool(const Entry& e, const std::string& key) {
  if (e.value == "true" || e.value == "1") return true;
  if (e.value == "false" || e.value == "0") return false;
  entry_fail(e, key + ": expected true or false, got '" + e.value + "'");
}

}  // namespace detail

namespace detail {

/// Adds the key = value lines of one document to entries. With replace, a
/// repeated key overrides the earlier value instead of being an error.
inline void collect_entries(std::string_view text, std::map<std::string, Entry>& entries, bool replace,
                            const std::string& where = "line") {
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  auto fail = [&](int col, const std::string& what) -> void {
    if (where == "line") config_fail(line_no, col, what);
    throw ConfigError(where + ": " + what);
  };
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const auto cpos = raw.find_first_of("#;");
    const std::string_view line = cpos == std::string_view::npos ? raw : raw.substr(0, cpos);
    const auto body = trim(line);
    if (body.empty()) continue;
    const int indent = static_cast<int>(line.find_first_not_of(" \t")) + 1;
    if (body.front() == '[') {
      if (body.back() != ']') fail(indent, "unterminated section header");
      section = std::string(trim(body.substr(1, body.size() - 2)));
      bool known = false;
      for (const auto& k : config_keys()) known = known || section == k.section;
      if (!known) fail(indent + 1, "unknown section '" + section + "'");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(indent, "expected 'key = value'");
    std::string key(trim(line.substr(0, eq)));
    if (key.empty()) fail(indent, "missing key before '='");
    const auto vstart = line.find_first_not_of(" \t", eq + 1);
    const std::string value(trim(line.substr(eq + 1)));
    if (value.empty()) fail(static_cast<int>(eq) + 2, "missing value for '" + key + "'");
    std::string sec = section;
    if (const auto dot = key.find('.'); dot != std::string::npos && sec.empty()) {
      sec = key.substr(0, dot);
      key = key.substr(dot + 1);
    }

    const KeySpec* spec = nullptr;
    for (const auto& k : config_keys())
      if (key == k.name && (sec.empty() || sec == k.section)) spec = &k;
    if (!spec) fail(indent, "unknown key '" + key + "'" + (sec.empty() ? std::string() : " in section [" + sec + "]"));
    const std::string full = std::string(spec->section) + "." + spec->name;
    if (!replace && entries.count(full)) fail(indent, "duplicate key '" + key + "'");
    entries[full] = Entry{value, line_no, static_cast<int>(vstart) + 1, where == "line" ? std::string() : where};
  }
}

}  // namespace detail

/// Parses a key = value document. Sections ([model], [grid], [time],
/// [initial], [strip], [output]) are optional; a key outside any section is
/// matched by name or written as section.key. '#' and ';' start comments.
/// overrides ("key=value" or "section.key=value") replace document values.
inline RunConfig parse_config(std::string_view text, const std::vector<std::string>& overrides = {}) {
  using namespace detail;
  std::map<std::string, Entry> entries;  // "section.name"
  collect_entries(text, entries, false);
  for (std::size_t i = 0; i < overrides.size(); ++i)
    collect_entries(overrides[i], entries, true, "override '" + overrides[i] + "'");

  RunConfig c;
  auto get = [&](const char* k) -> const Entry* {
    auto it = entries.find(k);
    return it == entries.end() ? nullptr : &it->second;
  };
  double alpha = 0.0, nu = 0.0;
  if (auto e = get("model.alpha")) alpha = as_double(*e, "alpha");
  if (auto e = get("model.nu")) nu = as_double(*e, "nu");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ConfigError("alpha must be ≥ 0");
  if (!(nu >= 0.0) || !std::isfinite(nu)) throw ConfigError("nu must be ≥ 0");
  const ModelKind auto_kind = classify_branch(alpha, nu);
  if (auto e = get("model.branch")) {
    ModelKind k;
    try {
      k = model_kind_from_string(e->value);
    } catch (const InvalidArgument& ex) {
      entry_fail(*e, ex.what());
    }
    if (k != auto_kind)
      throw ConfigError("branch " + e->value + " needs " +
                        (k == ModelKind::SecondGrade   ? "alpha > 0 and nu > 0"
                         : k == ModelKind::EulerAlpha  ? "alpha > 0 and nu = 0"
                         : k == ModelKind::NavierStokes ? "alpha = 0 and nu > 0"
                                                        : "alpha = 0 and nu = 0"));
  }
  c.branch = ModelBranch(auto_kind, alpha, nu);
  if (alpha > 0.0 && alpha < 1.0 && nu > 0.0 && nu < 1.0) c.regime = classify_regime(alpha, nu);

  if (auto e = get("grid.nx")) c.nx = static_cast<int>(as_int(*e, "nx"));
  if (auto e = get("grid.ny")) c.ny = e->value == "auto" ? 0 : static_cast<int>(as_int(*e, "ny"));
  if (auto e = get("grid.lx")) c.lx = as_double(*e, "lx");
  if (c.nx < 4 || c.nx % 2 != 0) throw ConfigError("nx must be even and ≥ 4");
  if (c.ny != 0 && c.ny < 8) throw ConfigError("ny must be ≥ 8 (or auto)");
  if (!(c.lx > 0.0) || !std::isfinite(c.lx)) throw ConfigError("lx must be > 0");

  if (auto e = get("time.dt")) c.ctrl.dt = as_double(*e, "dt");
  if (auto e = get("time.t_end")) c.ctrl.t_end = as_double(*e, "t_end");
  if (auto e = get("time.cfl_target")) c.ctrl.cfl_target = as_double(*e, "cfl_target");
  if (auto e = get("time.record_every")) c.ctrl.record_every = static_cast<int>(as_int(*e, "record_every"));
  try {
    c.ctrl.validate();
  } catch (const InvalidArgument& ex) {
    throw ConfigError(ex.what());
  }

  if (auto e = get("initial.base_flow")) {
    try {
      c.base_flow = base_flow_from_string(e->value);
    } catch (const InvalidArgument& ex) {
      entry_fail(*e, ex.what());
    }
  }
  if (auto e = get("initial.eps")) c.base_eps = as_double(*e, "eps");
  if (!std::isfinite(c.base_eps)) throw ConfigError("eps must be finite");
  if (auto e = get("initial.suitable")) c.suitable = as_bool(*e, "suitable");

  if (auto e = get("strip.rule")) {
    try {
      c.strip_rule = strip_rule_from_string(e->value);
    } catch (const InvalidArgument& ex) {
      entry_fail(*e, ex.what());
    }
  }
  if (auto e = get("strip.c")) c.strip_c = as_double(*e, "c");
  if (!(c.strip_c > 0.0) || !std::isfinite(c.strip_c)) throw ConfigError("strip constant must be > 0");

  if (auto e = get("output.dir")) c.output_dir = e->value;
  if (auto e = get("output.seed")) {
    const auto s = as_int(*e, "seed");
    if (s < 0) entry_fail(*e, "seed must be ≥ 0");
    c.seed = static_cast<std::uint64_t>(s);
  }
  if (const char* env = std::getenv("SGF_OUTPUT_DIR"); env && *env) c.output_dir = env;

  // cross-module constraints
  if (c.ny == 0) {
    try {
      (void)c.resolved_ny();
    } catch (const Unresolved& ex) {
      throw ConfigError(ex.what());
    }
  }
  if (c.suitable) {
    if (!c.branch.regularized()) throw ConfigError("suitable initial data needs alpha > 0");
    if (!(alpha < 1.0)) throw ConfigError("suitable initial data needs alpha < 1");
    if (nodes_in_strip(c.resolved_ny(), alpha) < 8)
      throw ConfigError("ny=" + std::to_string(c.resolved_ny()) + " leaves fewer than 8 nodes in the alpha collar");
  }
  if (c.branch.no_slip() && !c.suitable &&
      (c.base_flow == BaseFlow::Shear || c.base_flow == BaseFlow::PerturbedShear))
    throw ConfigError("base flow " + std::string(to_string(c.base_flow)) + " slips at the walls; branch " +
                      std::string(to_string(c.branch.kind)) + " needs suitable = true");
  if (c.branch.viscous()) {
    try {
      const double d = strip_width(c.strip_rule, alpha, nu, c.strip_c);
      (void)d;
    } catch (const ConfigError&) {
      throw;
    } catch (const InvalidArgument& ex) {
      throw ConfigError(ex.what());
    }
  }
  return c;
}

/// The strip width used for strip_dissipation, if the run has one.
inline std::optional<double> config_strip_delta(const RunConfig& c) {
  if (!c.branch.viscous()) return std::nullopt;
  return strip_width(c.strip_rule, c.branch.alpha, c.branch.nu, c.strip_c);
}

/// Canonical text form; parse_config(to_config_text(c)) reproduces c.
inline std::string to_config_text(const RunConfig& c) {
  auto num = [](double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
  };
  std::ostringstream o;
  o << "[model]\nbranch = " << to_string(c.branch.kind) << "\nalpha = " << num(c.branch.alpha)
    << "\nnu = " << num(c.branch.nu) << "\n\n[grid]\nnx = " << c.nx << "\nny = " << (c.ny ? std::to_string(c.ny) : "auto")
    << "\nlx = " << num(c.lx) << "\n\n[time]\ndt = " << num(c.ctrl.dt) << "\nt_end = " << num(c.ctrl.t_end)
    << "\ncfl_target = " << num(c.ctrl.cfl_target) << "\nrecord_every = " << c.ctrl.record_every
    << "\n\n[initial]\nbase_flow = " << to_string(c.base_flow) << "\neps = " << num(c.base_eps)
    << "\nsuitable = " << (c.suitable ? "true" : "false") << "\n\n[strip]\nrule = " << to_string(c.strip_rule)
    << "\nc = " << num(c.strip_c) << "\n\n[output]\ndir = " << c.output_dir << "\nseed = " << c.seed << "\n";
  return o.str();
}

}  // namespace sgf
