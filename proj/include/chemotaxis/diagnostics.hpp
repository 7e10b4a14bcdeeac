#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace chemotaxis {

struct DiagnosticsRow {
  double t = 0.0;
  double max_u = 0.0;
  double min_u = 0.0;
  double mass = 0.0;
  double max_v = 0.0;
  double min_v = 0.0;
  double max_w = 0.0;
  double min_w = 0.0;
  double clamped_mass = 0.0;  // removed by clamping since the previous row
  long solver_iters = 0;
  double damping_residual = 0.0;
};

/// Diagnostics recorded during a run, strictly increasing in t.
struct TimeSeries {
  std::vector<DiagnosticsRow> rows;
  // Set when the run ended on a rejected step; holds the time that step would have reached.
  std::optional<double> rejected_at;

  void push(const DiagnosticsRow& row) {
    if (!rows.empty() && !(row.t > rows.back().t)) throw std::invalid_argument("time series must increase in t");
    rows.push_back(row);
  }
  bool empty() const { return rows.empty(); }
  std::size_t size() const { return rows.size(); }
};

struct BlowupSettings {
  double growth_factor = 100.0;
  int window = 20;
  double plateau_tol = 0.02;
};

struct BlowupVerdict {
  bool blew_up = false;
  std::optional<double> t_max_estimate;
  double peak_value = 0.0;
  double growth = 0.0;
  std::string rationale;
};

/// Blow-up is declared when max u first exceeds growth_factor times its initial
/// value and afterwards stalls: some window of consecutive samples varies by less
/// than plateau_tol relative to its largest value. The estimated blow-up time is
/// the start of the first such window. A run cut short by a rejected step after
/// the growth counts as well, dated at the rejection.
inline BlowupVerdict detect_blowup(const TimeSeries& series, const BlowupSettings& s = {}) {
  if (series.empty()) throw std::invalid_argument("detect_blowup: empty series");
  if (!(s.growth_factor > 1.0) || s.window < 3 || !(s.plateau_tol > 0.0 && s.plateau_tol < 1.0))
    throw std::invalid_argument("detect_blowup: invalid detector settings");
  const auto& rows = series.rows;
  BlowupVerdict v;
  const double initial = rows.front().max_u;
  for (const auto& r : rows) v.peak_value = std::max(v.peak_value, r.max_u);
  v.growth = initial > 0.0 ? v.peak_value / initial : 0.0;

  std::size_t grown = rows.size();
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (rows[i].max_u > s.growth_factor * initial) {
      grown = i;
      break;
    }
  std::ostringstream why;
  if (grown == rows.size()) {
    why << "max u grew by a factor " << v.growth << ", below the threshold " << s.growth_factor;
    v.rationale = why.str();
    return v;
  }

  const auto w = static_cast<std::size_t>(s.window);
  for (std::size_t start = grown; start + w <= rows.size(); ++start) {
    double lo = rows[start].max_u, hi = lo;
    for (std::size_t j = start; j < start + w; ++j) {
      lo = std::min(lo, rows[j].max_u);
      hi = std::max(hi, rows[j].max_u);
    }
    if (hi > 0.0 && (hi - lo) / hi < s.plateau_tol) {
      v.blew_up = true;
      v.t_max_estimate = rows[start].t;
      why << "growth x" << s.growth_factor << " reached at t=" << rows[grown].t << ", plateau of " << s.window
          << " samples within " << s.plateau_tol << " from t=" << rows[start].t;
      v.rationale = why.str();
      return v;
    }
  }
  if (series.rejected_at) {
    v.blew_up = true;
    v.t_max_estimate = *series.rejected_at;
    why << "CFL collapse after growth (step rejected at t=" << *series.rejected_at << ")";
    v.rationale = why.str();
    return v;
  }
  why << "growth x" << s.growth_factor << " reached at t=" << rows[grown].t << " but max u has not stabilised";
  v.rationale = why.str();
  return v;
}

struct BlowupComparison {
  std::vector<std::pair<std::string, double>> ordered;  // by estimated blow-up time
  bool matches_declared_order = false;                  // strictly increasing along the input order
  bool all_equal = false;
};

/// Sorts blown-up runs by estimated blow-up time and reports whether that order
/// agrees with the order in which they were given (e.g. ascending m1).
inline BlowupComparison compare_blowup_times(const std::vector<std::pair<std::string, BlowupVerdict>>& verdicts) {
  if (verdicts.size() < 2) throw std::invalid_argument("not comparable: need at least two verdicts");
  for (const auto& [label, v] : verdicts)
    if (!v.blew_up || !v.t_max_estimate) throw std::invalid_argument("not comparable: run '" + label + "' did not blow up");
  BlowupComparison out;
  for (const auto& [label, v] : verdicts) out.ordered.emplace_back(label, *v.t_max_estimate);
  out.matches_declared_order = true;
  out.all_equal = true;
  for (std::size_t i = 1; i < out.ordered.size(); ++i) {
    if (!(out.ordered[i].second > out.ordered[i - 1].second)) out.matches_declared_order = false;
    if (out.ordered[i].second != out.ordered[0].second) out.all_equal = false;
  }
  std::stable_sort(out.ordered.begin(), out.ordered.end(),
                   [](const auto& a, const auto& b) { return a.second < b.second; });
  return out;
}

}  // namespace chemotaxis
