#pragma once

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "chemotaxis/config.hpp"
#include "chemotaxis/io.hpp"
#include "chemotaxis/svg_plot.hpp"
#include "chemotaxis/timestepper.hpp"

namespace chemotaxis {

namespace fs = std::filesystem;

/// Runs one configuration and writes config.echo, series.csv, verdict.txt,
/// maxu.svg and snapshot_<step>.vtk files into `dir`.
inline RunResult execute_run(const RunConfig& cfg, const fs::path& dir, const std::string& label = {}) {
  fs::create_directories(dir);
  io::write_text_file((dir / "config.echo").string(), to_config_text(cfg, {}, label));
  auto snapshot = [&dir, &label](const Mesh& mesh, const State& st) {
    char name[48];
    std::snprintf(name, sizeof name, "snapshot_%06ld.vtk", st.step_index);
    std::ofstream out(dir / name);
    if (!out) throw std::runtime_error("cannot write snapshot in '" + dir.string() + "'");
    io::write_vtk(out, mesh, {{"u", &st.u}, {"v", &st.v}, {"w", &st.w}}, label.empty() ? "chemotaxis" : label);
  };
  RunResult r = run_simulation(cfg, snapshot);
  io::write_text_file((dir / "series.csv").string(), io::series_csv(r.series));
  std::string verdict = io::verdict_text(r.verdict, cfg.blowup);
  if (r.rejection) verdict += "rejection=" + *r.rejection + "\n";
  io::write_text_file((dir / "verdict.txt").string(), verdict);

  svg::Curve curve{label.empty() ? "max u" : label, {}, {}};
  for (const auto& row : r.series.rows) {
    curve.x.push_back(row.t);
    curve.y.push_back(row.max_u);
  }
  svg::PlotOptions opt;
  opt.title = label.empty() ? "maximum of u" : "maximum of u: " + label;
  io::write_text_file((dir / "maxu.svg").string(), svg::line_plot({curve}, opt));
  return r;
}

struct SweepPoint {
  std::size_t index = 0;
  std::vector<std::pair<std::string, std::string>> assignment;
  RunConfig config;

  std::string label() const {
    std::string s;
    for (const auto& [k, v] : assignment) s += (s.empty() ? "" : " ") + k + "=" + v;
    return s.empty() ? "base" : s;
  }
};

/// Cartesian product of the sweep axes, first axis varying slowest.
inline std::vector<SweepPoint> expand_sweep(const RunConfig& base, const std::vector<SweepAxis>& axes) {
  std::vector<SweepPoint> points{SweepPoint{0, {}, base}};
  for (const auto& axis : axes) {
    std::vector<SweepPoint> next;
    for (const auto& p : points)
      for (const auto& value : axis.values) {
        SweepPoint q = p;
        apply_setting(q.config, axis.key, value);
        q.assignment.emplace_back(axis.key, value);
        next.push_back(std::move(q));
      }
    points = std::move(next);
  }
  for (std::size_t i = 0; i < points.size(); ++i) points[i].index = i;
  return points;
}

struct SweepOutcome {
  SweepPoint point;
  std::optional<BlowupVerdict> verdict;
  std::optional<std::string> rejection;
  double initial_max = 0.0;
  double final_t = 0.0;
  std::string error;
  std::vector<double> t, max_u;
};

inline std::string sweep_csv(const std::vector<SweepOutcome>& outcomes) {
  std::ostringstream os;
  os << "run";
  if (!outcomes.empty())
    for (const auto& [k, v] : outcomes.front().point.assignment) os << ',' << k;
  os << ",status,blew_up,t_max_estimate,peak_value,growth,final_t,rationale,error\n";
  for (const auto& o : outcomes) {
    os << o.point.index;
    for (const auto& [k, v] : o.point.assignment) os << ',' << v;
    if (o.verdict) {
      const auto& v = *o.verdict;
      os << ",ok," << (v.blew_up ? "true" : "false") << ','
         << (v.t_max_estimate ? io::sci(*v.t_max_estimate) : std::string()) << ',' << io::sci(v.peak_value) << ','
         << io::sci(v.growth) << ',' << io::sci(o.final_t) << ",\"" << v.rationale << "\",";
    } else {
      os << ",failed,,,,,,,";
    }
    std::string err = o.error;
    std::replace(err.begin(), err.end(), '"', '\'');
    os << '"' << err << "\"\n";
  }
  return os.str();
}

/// Executes every sweep point on a pool of `workers` threads. Each run writes
/// into its own run_<index> subdirectory; failures are recorded, not rethrown.
inline std::vector<SweepOutcome> run_sweep(const ParsedConfig& parsed, const fs::path& out_dir, int workers = 1) {
  const auto points = expand_sweep(parsed.run, parsed.sweep);
  fs::create_directories(out_dir);
  io::write_text_file((out_dir / "config.echo").string(), to_config_text(parsed.run, parsed.sweep, parsed.label));

  std::vector<SweepOutcome> outcomes(points.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      SweepOutcome& o = outcomes[i];
      o.point = points[i];
      char dir[32];
      std::snprintf(dir, sizeof dir, "run_%03zu", i);
      try {
        const RunResult r = execute_run(o.point.config, out_dir / dir, o.point.label());
        o.verdict = r.verdict;
        o.rejection = r.rejection;
        o.initial_max = r.series.rows.front().max_u;
        o.final_t = r.series.rows.back().t;
        for (const auto& row : r.series.rows) {
          o.t.push_back(row.t);
          o.max_u.push_back(row.max_u);
        }
        if (r.rejection) o.error = *r.rejection;
      } catch (const std::exception& e) {
        o.error = e.what();
      }
    }
  };
  const int n = std::max(1, std::min<int>(workers, static_cast<int>(points.size())));
  std::vector<std::thread> pool;
  for (int k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  io::write_text_file((out_dir / "sweep.csv").string(), sweep_csv(outcomes));
  std::vector<svg::Curve> curves;
  for (const auto& o : outcomes)
    if (!o.t.empty()) curves.push_back({o.point.label(), o.t, o.max_u});
  svg::PlotOptions opt;
  opt.title = parsed.label.empty() ? "maximum of u" : "maximum of u: " + parsed.label;
  io::write_text_file((out_dir / "maxu.svg").string(), svg::line_plot(curves, opt));
  return outcomes;
}

}  // namespace chemotaxis
