#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "chemotaxis/timestepper.hpp"

namespace chemotaxis {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& what)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct ConfigEntry {
  std::string section;
  std::string key;
  std::string value;
  int line = 0;
};

/// Flat configuration: `[section]` headers, `key = value` lines, `#` comments.
struct ConfigDocument {
  std::vector<ConfigEntry> entries;

  static ConfigDocument parse(const std::string& text) {
    ConfigDocument doc;
    std::istringstream in(text);
    std::string raw, section;
    int line_no = 0;
    while (std::getline(in, raw)) {
      ++line_no;
      if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
      const std::string line = trim(raw);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']') throw ConfigError(line_no, "malformed section header '" + line + "'");
        section = trim(line.substr(1, line.size() - 2));
        if (section.empty()) throw ConfigError(line_no, "empty section name");
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw ConfigError(line_no, "expected 'key = value', got '" + line + "'");
      if (section.empty()) throw ConfigError(line_no, "entry outside of any section");
      ConfigEntry e{section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)), line_no};
      if (e.key.empty()) throw ConfigError(line_no, "empty key");
      doc.entries.push_back(std::move(e));
    }
    return doc;
  }

  static ConfigDocument load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(0, "cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
  }

  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
  }
};

namespace detail {

inline double parse_double(const std::string& v, int line) {
  double out = 0.0;
  const char* b = v.data();
  const char* e = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(b, e, out);
  if (ec != std::errc() || ptr != e) throw ConfigError(line, "expected a number, got '" + v + "'");
  return out;
}

inline long parse_long(const std::string& v, int line) {
  long out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) throw ConfigError(line, "expected an integer, got '" + v + "'");
  return out;
}

inline bool parse_bool(const std::string& v, int line) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(line, "expected true/false, got '" + v + "'");
}

inline std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(v);
  while (std::getline(in, item, ',')) {
    item = ConfigDocument::trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

using Setter = std::function<void(RunConfig&, const std::string&, int)>;

inline const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    auto real = [&t](const std::string& key, double RunConfig::*member) {
      t[key] = [member](RunConfig& c, const std::string& v, int l) { c.*member = parse_double(v, l); };
    };
    auto param = [&t](const std::string& key, double ModelParams::*member) {
      t["params." + key] = [member](RunConfig& c, const std::string& v, int l) { c.params.*member = parse_double(v, l); };
    };
    t["params.n"] = [](RunConfig& c, const std::string& v, int l) {
      c.params.n = static_cast<int>(parse_long(v, l));
      c.mesh.dim = c.params.n;
    };
    t["params.tau"] = [](RunConfig& c, const std::string& v, int l) { c.params.tau = static_cast<int>(parse_long(v, l)); };
    t["params.nonlocal"] = [](RunConfig& c, const std::string& v, int l) { c.params.nonlocal = parse_bool(v, l); };
    param("chi", &ModelParams::chi);
    param("xi", &ModelParams::xi);
    param("lambda", &ModelParams::lambda);
    param("mu", &ModelParams::mu);
    param("c", &ModelParams::c);
    param("rho", &ModelParams::rho);
    param("k", &ModelParams::k);
    param("gamma", &ModelParams::gamma);
    param("m1", &ModelParams::m1);
    param("m2", &ModelParams::m2);
    param("m3", &ModelParams::m3);
    param("alpha", &ModelParams::alpha);
    param("beta", &ModelParams::beta);
    param("f1_coeff", &ModelParams::f1_coeff);
    param("f2_lo", &ModelParams::f2_lo);
    param("f2_hi", &ModelParams::f2_hi);

    t["mesh.kind"] = [](RunConfig& c, const std::string& v, int l) {
      if (v != "ball" && v != "box") throw ConfigError(l, "mesh kind must be ball or box");
      c.mesh.kind = v;
    };
    t["mesh.dim"] = [](RunConfig& c, const std::string& v, int l) { c.mesh.dim = static_cast<int>(parse_long(v, l)); };
    t["mesh.radius"] = [](RunConfig& c, const std::string& v, int l) { c.mesh.radius = parse_double(v, l); };
    t["mesh.h"] = [](RunConfig& c, const std::string& v, int l) { c.mesh.h = parse_double(v, l); };
    t["mesh.lengths"] = [](RunConfig& c, const std::string& v, int l) {
      c.mesh.lengths.clear();
      for (const auto& s : split_list(v)) c.mesh.lengths.push_back(parse_double(s, l));
    };
    t["mesh.cells"] = [](RunConfig& c, const std::string& v, int l) {
      c.mesh.cells.clear();
      for (const auto& s : split_list(v)) {
        const long n = parse_long(s, l);
        if (n < 1) throw ConfigError(l, "cell counts must be positive");
        c.mesh.cells.push_back(static_cast<std::size_t>(n));
      }
    };

    real("run.dt", &RunConfig::dt);
    real("run.t_end", &RunConfig::t_end);
    real("run.cfl_max", &RunConfig::cfl_max);
    real("run.eps_damp", &RunConfig::eps_damp);
    t["run.initial"] = [](RunConfig& c, const std::string& v, int) { c.initial = v; };
    t["run.signal_init"] = [](RunConfig& c, const std::string& v, int) { c.signal_init = v; };
    t["run.record_every"] = [](RunConfig& c, const std::string& v, int l) { c.record_every = static_cast<int>(parse_long(v, l)); };
    t["run.snapshot_every"] = [](RunConfig& c, const std::string& v, int l) {
      c.snapshot_every = static_cast<int>(parse_long(v, l));
    };
    t["run.stop_on_blowup"] = [](RunConfig& c, const std::string& v, int l) { c.stop_on_blowup = parse_bool(v, l); };
    t["run.solver_tol"] = [](RunConfig& c, const std::string& v, int l) { c.solver.tol = parse_double(v, l); };
    t["run.solver_max_iter"] = [](RunConfig& c, const std::string& v, int l) {
      c.solver.max_iter = static_cast<int>(parse_long(v, l));
    };
    t["run.solve_inactive_signals"] = [](RunConfig& c, const std::string& v, int l) {
      c.solve_inactive_signals = parse_bool(v, l);
    };
    t["run.seed"] = [](RunConfig& c, const std::string& v, int l) { c.seed = static_cast<std::uint64_t>(parse_long(v, l)); };

    t["blowup.growth_factor"] = [](RunConfig& c, const std::string& v, int l) { c.blowup.growth_factor = parse_double(v, l); };
    t["blowup.window"] = [](RunConfig& c, const std::string& v, int l) { c.blowup.window = static_cast<int>(parse_long(v, l)); };
    t["blowup.plateau_tol"] = [](RunConfig& c, const std::string& v, int l) { c.blowup.plateau_tol = parse_double(v, l); };
    return t;
  }();
  return table;
}

}  // namespace detail

/// Sets one `section.key`; a bare key is looked up among the model parameters.
inline void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value, int line = 0) {
  const auto& table = detail::setters();
  auto it = table.find(key);
  if (it == table.end() && key.find('.') == std::string::npos) it = table.find("params." + key);
  if (it == table.end()) throw ConfigError(line, "unknown setting '" + key + "'");
  it->second(cfg, value, line);
}

/// Sweep axes: each `[sweep]` entry names a setting and a comma-separated list of values.
struct SweepAxis {
  std::string key;
  std::vector<std::string> values;
};

struct ParsedConfig {
  RunConfig run;
  std::vector<SweepAxis> sweep;
  std::string label;
};

inline ParsedConfig parse_config(const ConfigDocument& doc) {
  ParsedConfig out;
  for (const auto& e : doc.entries) {
    if (e.section == "sweep") {
      auto values = detail::split_list(e.value);
      if (values.empty()) throw ConfigError(e.line, "sweep axis '" + e.key + "' has no values");
      RunConfig probe;
      for (const auto& v : values) apply_setting(probe, e.key, v, e.line);
      out.sweep.push_back({e.key, std::move(values)});
    } else if (e.section == "meta") {
      if (e.key == "label") out.label = e.value;
      else if (e.key != "description") throw ConfigError(e.line, "unknown setting 'meta." + e.key + "'");
    } else {
      apply_setting(out.run, e.section + "." + e.key, e.value, e.line);
    }
  }
  return out;
}

inline ParsedConfig parse_config_text(const std::string& text) { return parse_config(ConfigDocument::parse(text)); }

/// Canonical text form: every setting, full precision. Parsing it back gives an
/// identical RunConfig.
inline std::string to_config_text(const RunConfig& c, const std::vector<SweepAxis>& sweep = {}, const std::string& label = {}) {
  using detail::fmt;
  std::ostringstream os;
  if (!label.empty()) os << "[meta]\nlabel = " << label << "\n\n";
  const auto& p = c.params;
  os << "[params]\n"
     << "n = " << p.n << "\ntau = " << p.tau << "\nnonlocal = " << (p.nonlocal ? "true" : "false") << "\n"
     << "chi = " << fmt(p.chi) << "\nxi = " << fmt(p.xi) << "\nlambda = " << fmt(p.lambda) << "\nmu = " << fmt(p.mu)
     << "\nc = " << fmt(p.c) << "\nrho = " << fmt(p.rho) << "\nk = " << fmt(p.k) << "\ngamma = " << fmt(p.gamma)
     << "\nm1 = " << fmt(p.m1) << "\nm2 = " << fmt(p.m2) << "\nm3 = " << fmt(p.m3) << "\nalpha = " << fmt(p.alpha)
     << "\nbeta = " << fmt(p.beta) << "\nf1_coeff = " << fmt(p.f1_coeff) << "\nf2_lo = " << fmt(p.f2_lo)
     << "\nf2_hi = " << fmt(p.f2_hi) << "\n\n";
  os << "[mesh]\nkind = " << c.mesh.kind << "\ndim = " << c.mesh.dim << "\nradius = " << fmt(c.mesh.radius)
     << "\nh = " << fmt(c.mesh.h) << "\n";
  if (!c.mesh.lengths.empty()) {
    os << "lengths = ";
    for (std::size_t i = 0; i < c.mesh.lengths.size(); ++i) os << (i ? ", " : "") << fmt(c.mesh.lengths[i]);
    os << "\n";
  }
  if (!c.mesh.cells.empty()) {
    os << "cells = ";
    for (std::size_t i = 0; i < c.mesh.cells.size(); ++i) os << (i ? ", " : "") << c.mesh.cells[i];
    os << "\n";
  }
  os << "\n[run]\ndt = " << fmt(c.dt) << "\nt_end = " << fmt(c.t_end) << "\ninitial = " << c.initial
     << "\nsignal_init = " << c.signal_init << "\nrecord_every = " << c.record_every
     << "\nsnapshot_every = " << c.snapshot_every << "\nstop_on_blowup = " << (c.stop_on_blowup ? "true" : "false")
     << "\ncfl_max = " << fmt(c.cfl_max) << "\neps_damp = " << fmt(c.eps_damp) << "\nsolver_tol = " << fmt(c.solver.tol)
     << "\nsolver_max_iter = " << c.solver.max_iter
     << "\nsolve_inactive_signals = " << (c.solve_inactive_signals ? "true" : "false") << "\nseed = " << c.seed << "\n\n";
  os << "[blowup]\ngrowth_factor = " << fmt(c.blowup.growth_factor) << "\nwindow = " << c.blowup.window
     << "\nplateau_tol = " << fmt(c.blowup.plateau_tol) << "\n";
  if (!sweep.empty()) {
    os << "\n[sweep]\n";
    for (const auto& axis : sweep) {
      os << axis.key << " = ";
      for (std::size_t i = 0; i < axis.values.size(); ++i) os << (i ? ", " : "") << axis.values[i];
      os << "\n";
    }
  }
  return os.str();
}

}  // namespace chemotaxis
