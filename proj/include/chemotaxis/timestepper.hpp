#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "chemotaxis/chemical_solver.hpp"
#include "chemotaxis/diagnostics.hpp"
#include "chemotaxis/expression.hpp"
#include "chemotaxis/field.hpp"
#include "chemotaxis/linear_solver.hpp"
#include "chemotaxis/mesh.hpp"
#include "chemotaxis/model_params.hpp"
#include "chemotaxis/operators.hpp"

namespace chemotaxis {

enum class SignalModel { elliptic, parabolic, nonlocal };

inline SignalModel signal_model(const ModelParams& p) {
  if (p.nonlocal) return SignalModel::nonlocal;
  return p.tau == 1 ? SignalModel::parabolic : SignalModel::elliptic;
}

/// Attractant and repellent production laws; u^alpha and u^beta unless replaced.
struct Productions {
  ProductionLaw attractant;
  ProductionLaw repellent;

  static Productions prototypes(const ModelParams& p) { return {power_law(p.alpha), power_law(p.beta)}; }
};

struct State {
  Field u, v, w;
  double t = 0.0;
  long step_index = 0;
};

struct StepSettings {
  double dt = 1e-5;
  double cfl_max = 0.9;
  double eps_damp = 1e-8;
  SolverOptions solver;
  // A signal whose sensitivity is zero has no effect on u; it is left at zero unless this is set.
  bool solve_inactive_signals = false;
};

class StepRejected : public std::runtime_error {
 public:
  StepRejected(std::size_t face, double cfl, double t, const std::string& what)
      : std::runtime_error(what), face_(face), cfl_(cfl), t_(t) {}
  std::size_t face() const { return face_; }
  double cfl() const { return cfl_; }
  double time() const { return t_; }

 private:
  std::size_t face_;
  double cfl_;
  double t_;
};

struct StepReport {
  double clamped_mass = 0.0;
  double damping_residual = 0.0;
  double max_cfl = 0.0;
  long solver_iters = 0;
};

/// Named presets gauss3d, gauss2d, constant(c); anything else is read as an
/// expression in x, y, z, r.
inline Field initial_condition(const Mesh& mesh, const std::string& preset) {
  std::string text = preset;
  if (preset == "gauss3d") text = "500*exp(-35*(x^2+y^2+z^2))";
  else if (preset == "gauss2d") text = "500*exp(-35*(x^2+y^2))";
  else if (preset.rfind("constant(", 0) == 0 && preset.back() == ')') text = preset.substr(9, preset.size() - 10);

  std::optional<Expression> expr;
  try {
    expr.emplace(text);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument("unknown initial condition preset '" + preset + "' (" + e.what() + ")");
  }
  Field u(mesh);
  for (std::size_t i = 0; i < mesh.num_cells(); ++i) {
    const auto& x = mesh.cell(i).center;
    u[i] = (*expr)(x[0], x[1], x[2]);
    if (!(u[i] >= 0.0) || !std::isfinite(u[i]))
      throw std::invalid_argument("initial condition '" + preset + "' is negative or not finite");
  }
  return u;
}

namespace detail {

inline bool signal_active(double sensitivity, const StepSettings& s) { return sensitivity != 0.0 || s.solve_inactive_signals; }

inline SignalSolve compute_signal(SignalModel model, const Field& previous, const Field& u, const ProductionLaw& f,
                                  const Mesh& mesh, const StepSettings& s) {
  switch (model) {
    case SignalModel::elliptic: return solve_elliptic_chemical(u, f, mesh, s.solver, &previous);
    case SignalModel::parabolic: return step_parabolic_chemical(previous, u, f, mesh, s.dt, s.solver);
    case SignalModel::nonlocal: return solve_nonlocal_chemical(u, f, mesh, s.solver, &previous);
  }
  throw std::logic_error("unreachable");
}

}  // namespace detail

/// Quasi-steady signals for u: the elliptic (local) or mean-corrected Poisson
/// (nonlocal) solution. Used to initialise a run.
inline State make_initial_state(const Mesh& mesh, Field u0, const ModelParams& p, const Productions& prod,
                                const StepSettings& s, bool zero_signals = false) {
  State st{std::move(u0), Field(mesh), Field(mesh), 0.0, 0};
  if (zero_signals) return st;
  const SignalModel model = p.nonlocal ? SignalModel::nonlocal : SignalModel::elliptic;
  if (detail::signal_active(p.chi, s)) st.v = detail::compute_signal(model, st.v, st.u, prod.attractant, mesh, s).field;
  if (detail::signal_active(p.xi, s)) st.w = detail::compute_signal(model, st.w, st.u, prod.repellent, mesh, s).field;
  return st;
}

/// One linear IMEX step. Signals are computed first from u_old; then
///
///   (V/dt + L_diff + V (mu u_old^{k-1} + c |grad u_old|^gamma / max(u_old, eps))) u_new
///       = V (u_old/dt - div(F_attr + F_rep) + lambda u_old^rho),
///
/// with L_diff the two-point diffusion operator frozen at u_old and F the explicit
/// upwind chemotactic fluxes. The left-hand side is a symmetric M-matrix, so u_new
/// stays nonnegative whenever the explicit part does, which the CFL check ensures.
inline std::pair<State, StepReport> imex_step(const State& state, const Mesh& mesh, const ModelParams& p,
                                              const Productions& prod, const StepSettings& s) {
  const double dt = s.dt;
  if (!(dt > 0.0)) throw std::invalid_argument("imex_step: dt must be positive");
  const Field& u = state.u;
  u.check_on(mesh);
  if (u.min() < 0.0) throw std::invalid_argument("imex_step: u must be nonnegative");

  StepReport report;
  State next{u, state.v, state.w, state.t + dt, state.step_index + 1};
  const SignalModel model = signal_model(p);
  if (detail::signal_active(p.chi, s)) {
    auto sol = detail::compute_signal(model, state.v, u, prod.attractant, mesh, s);
    next.v = std::move(sol.field);
    report.solver_iters += sol.iterations;
  }
  if (detail::signal_active(p.xi, s)) {
    auto sol = detail::compute_signal(model, state.w, u, prod.repellent, mesh, s);
    next.w = std::move(sol.field);
    report.solver_iters += sol.iterations;
  }

  const std::size_t nc = mesh.num_cells();
  const auto attr_vel = chemotactic_velocity(next.v, mesh, +1, p.chi);
  const auto rep_vel = chemotactic_velocity(next.w, mesh, -1, p.xi);

  // Face and cell-outflow CFL numbers. The cell form bounds the explicit outflow
  // by u_old V/dt, which keeps the right-hand side nonnegative.
  std::vector<double> outflow_rate(nc, 0.0);
  std::size_t worst_face = 0;
  double worst = 0.0;
  for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
    const Face& face = mesh.face(f);
    const double face_cfl = (std::abs(attr_vel[f]) + std::abs(rep_vel[f])) * dt / face.distance;
    if (face_cfl > worst) {
      worst = face_cfl;
      worst_face = f;
    }
    auto add_outflow = [&](double vel, double m) {
      if (vel == 0.0) return;
      const std::size_t up = vel > 0.0 ? face.owner : face.neighbor;
      outflow_rate[up] += face.area * std::abs(vel) * nonlinear_diffusivity(u[up], m);
    };
    add_outflow(attr_vel[f], p.m2);
    add_outflow(rep_vel[f], p.m3);
  }
  for (std::size_t i = 0; i < nc; ++i) {
    const double cell_cfl = outflow_rate[i] * dt / mesh.cell(i).volume;
    if (cell_cfl > worst) {
      worst = cell_cfl;
      double largest = -1.0;
      for (std::size_t f : mesh.cell_faces(i)) {
        const double speed = std::abs(attr_vel[f]) + std::abs(rep_vel[f]);
        if (speed > largest) {
          largest = speed;
          worst_face = f;
        }
      }
    }
  }
  report.max_cfl = worst;
  if (worst > s.cfl_max) {
    std::ostringstream os;
    os << "step rejected at t=" << state.t << ": CFL number " << worst << " exceeds " << s.cfl_max << " at face "
       << worst_face << " (cells " << mesh.face(worst_face).owner << ", " << mesh.face(worst_face).neighbor << ")";
    throw StepRejected(worst_face, worst, state.t, os.str());
  }

  FaceFlux transport = upwind_chemotactic_flux(u, next.v, mesh, +1, p.m2, p.chi);
  transport += upwind_chemotactic_flux(u, next.w, mesh, -1, p.m3, p.xi);
  const Field conv = divergence(transport, mesh);

  const Field grad = p.c > 0.0 ? gradient_magnitude(u, mesh) : Field(mesh);
  std::vector<double> diag(nc), rhs(nc);
  for (std::size_t i = 0; i < nc; ++i) {
    const double vol = mesh.cell(i).volume;
    const double death = p.mu == 0.0 ? 0.0 : p.mu * std::pow(u[i], p.k - 1.0);
    double absorption = 0.0;
    if (p.c > 0.0 && grad[i] > 0.0) {
      const double damping = p.c * std::pow(grad[i], p.gamma);
      const double floor = std::max(u[i], s.eps_damp);
      absorption = damping / floor;
      report.damping_residual += vol * damping * (1.0 - u[i] / floor);
    }
    diag[i] = vol * (1.0 / dt + death + absorption);
    const double growth = p.lambda == 0.0 ? 0.0 : p.lambda * std::pow(u[i], p.rho);
    rhs[i] = vol * (u[i] / dt - conv[i] + growth);
  }
  const auto face_coeff = diffusion_face_coefficients(u, mesh, p.m1);
  const auto A = assemble_neumann_operator(mesh, face_coeff, diag);
  auto sol = solve_spd(A, rhs, s.solver, u.values());
  report.solver_iters += sol.iterations;

  // The exact solution satisfies sum_i diag_i x_i = sum_i rhs_i, because the
  // diffusion rows sum to zero. Rescaling restores that balance, so mass is
  // conserved to round-off rather than to the solver tolerance.
  double lhs_sum = 0.0, rhs_sum = 0.0;
  for (std::size_t i = 0; i < nc; ++i) {
    lhs_sum += diag[i] * sol.x[i];
    rhs_sum += rhs[i];
  }
  if (lhs_sum > 0.0 && rhs_sum > 0.0) {
    const double scale = rhs_sum / lhs_sum;
    for (double& x : sol.x) x *= scale;
  }

  for (std::size_t i = 0; i < nc; ++i)
    if (sol.x[i] < 0.0) {
      report.clamped_mass += -sol.x[i] * mesh.cell(i).volume;
      sol.x[i] = 0.0;
    }
  next.u = Field(mesh, std::move(sol.x));
  return {std::move(next), report};
}

struct MeshSpec {
  std::string kind = "ball";  // ball | box
  int dim = 2;
  double radius = 1.0;
  double h = 0.05;
  std::vector<double> lengths;
  std::vector<std::size_t> cells;
};

inline Mesh build_mesh(const MeshSpec& spec) {
  if (spec.kind == "ball") return build_ball_mesh(spec.dim, spec.radius, spec.h);
  if (spec.kind == "box") return build_box_mesh(spec.dim, spec.lengths, spec.cells);
  throw std::invalid_argument("unknown mesh kind '" + spec.kind + "'");
}

struct RunConfig {
  ModelParams params;
  MeshSpec mesh;
  double dt = 1e-5;
  double t_end = 1e-3;
  std::string initial = "gauss2d";
  std::string signal_init = "elliptic";  // elliptic | zero (initial v, w when tau = 1)
  int record_every = 1;
  int snapshot_every = 0;
  BlowupSettings blowup;
  bool stop_on_blowup = true;
  double cfl_max = 0.9;
  double eps_damp = 1e-8;
  SolverOptions solver;
  bool solve_inactive_signals = false;
  std::uint64_t seed = 0;  // reserved

  void validate() const {
    params.validate();
    if (!(dt > 0.0)) throw std::invalid_argument("run config: dt must be positive");
    if (!(t_end > dt)) throw std::invalid_argument("run config: t_end must exceed dt");
    if (record_every < 1) throw std::invalid_argument("run config: record_every must be >= 1");
    if (snapshot_every < 0) throw std::invalid_argument("run config: snapshot_every must be >= 0");
    if (signal_init != "elliptic" && signal_init != "zero")
      throw std::invalid_argument("run config: signal_init must be elliptic or zero");
    if (!(cfl_max > 0.0)) throw std::invalid_argument("run config: cfl_max must be positive");
    if (!(eps_damp > 0.0)) throw std::invalid_argument("run config: eps_damp must be positive");
    if (mesh.dim != params.n) throw std::invalid_argument("run config: mesh dimension differs from n");
  }

  StepSettings step_settings() const { return {dt, cfl_max, eps_damp, solver, solve_inactive_signals}; }
};

struct RunResult {
  Mesh mesh;
  State final_state;
  TimeSeries series;
  BlowupVerdict verdict;
  double initial_mass = 0.0;
  std::optional<std::string> rejection;
};

using SnapshotHook = std::function<void(const Mesh&, const State&)>;

namespace detail {

inline DiagnosticsRow diagnostics_row(const State& st, const Mesh& mesh, const StepReport& rep) {
  DiagnosticsRow r;
  r.t = st.t;
  r.max_u = st.u.max();
  r.min_u = st.u.min();
  r.mass = integrate(st.u, mesh);
  r.max_v = st.v.max();
  r.min_v = st.v.min();
  r.max_w = st.w.max();
  r.min_w = st.w.min();
  r.clamped_mass = rep.clamped_mass;
  r.solver_iters = rep.solver_iters;
  r.damping_residual = rep.damping_residual;
  return r;
}

}  // namespace detail

/// Advances until t_end, until the blow-up detector sees a plateau after growth
/// (when stop_on_blowup), or until a step is rejected. Deterministic for a fixed
/// configuration.
inline RunResult run_simulation(const RunConfig& cfg, const Productions& prod, const SnapshotHook& on_snapshot = {}) {
  cfg.validate();
  RunResult out{build_mesh(cfg.mesh), State{}, TimeSeries{}, BlowupVerdict{}, 0.0, std::nullopt};
  const Mesh& mesh = out.mesh;
  const StepSettings settings = cfg.step_settings();

  State st = make_initial_state(mesh, initial_condition(mesh, cfg.initial), cfg.params, prod, settings,
                                cfg.params.tau == 1 && cfg.signal_init == "zero");
  out.initial_mass = integrate(st.u, mesh);
  out.series.push(detail::diagnostics_row(st, mesh, StepReport{}));
  if (on_snapshot && cfg.snapshot_every > 0) on_snapshot(mesh, st);

  const auto n_steps = static_cast<long>(std::ceil(cfg.t_end / cfg.dt - 1e-9));
  const double threshold = cfg.blowup.growth_factor * out.series.rows.front().max_u;
  std::optional<std::size_t> grown;
  const auto window = static_cast<std::size_t>(cfg.blowup.window);
  double clamped_since_row = 0.0;

  for (long step = 1; step <= n_steps; ++step) {
    StepReport rep;
    try {
      auto [next, r] = imex_step(st, mesh, cfg.params, prod, settings);
      st = std::move(next);
      rep = r;
    } catch (const StepRejected& e) {
      out.series.rejected_at = static_cast<double>(step) * cfg.dt;
      out.rejection = e.what();
      break;
    }
    st.t = static_cast<double>(step) * cfg.dt;
    st.step_index = step;
    clamped_since_row += rep.clamped_mass;

    if (step % cfg.record_every == 0 || step == n_steps) {
      rep.clamped_mass = clamped_since_row;
      clamped_since_row = 0.0;
      out.series.push(detail::diagnostics_row(st, mesh, rep));
      const auto& rows = out.series.rows;
      if (!grown && rows.back().max_u > threshold) grown = rows.size() - 1;
      if (cfg.stop_on_blowup && grown && rows.size() >= *grown + window) {
        double lo = rows.back().max_u, hi = lo;
        for (std::size_t j = rows.size() - window; j < rows.size(); ++j) {
          lo = std::min(lo, rows[j].max_u);
          hi = std::max(hi, rows[j].max_u);
        }
        if (hi > 0.0 && (hi - lo) / hi < cfg.blowup.plateau_tol) {
          if (on_snapshot && cfg.snapshot_every > 0) on_snapshot(mesh, st);
          break;
        }
      }
    }
    if (on_snapshot && cfg.snapshot_every > 0 && step % cfg.snapshot_every == 0) on_snapshot(mesh, st);
  }
  out.final_state = std::move(st);
  out.verdict = detect_blowup(out.series, cfg.blowup);
  return out;
}

inline RunResult run_simulation(const RunConfig& cfg, const SnapshotHook& on_snapshot = {}) {
  return run_simulation(cfg, Productions::prototypes(cfg.params), on_snapshot);
}

}  // namespace chemotaxis
