#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "chemotaxis/field.hpp"
#include "chemotaxis/linear_solver.hpp"
#include "chemotaxis/mesh.hpp"
#include "chemotaxis/sparse.hpp"

namespace chemotaxis {

/// Production law f: [0, inf) -> [0, inf).
using ProductionLaw = std::function<double(double)>;

inline ProductionLaw power_law(double exponent) {
  if (exponent == 1.0) return [](double s) { return s; };
  return [exponent](double s) { return std::pow(s, exponent); };
}

struct SignalSolve {
  Field field;
  int iterations = 0;
  double relative_residual = 0.0;
};

namespace detail {

inline std::vector<double> produced(const Field& u, const ProductionLaw& f) {
  std::vector<double> s(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) s[i] = f(u[i]);
  return s;
}

inline SparseOperator screened_operator(const Mesh& mesh, double diag_scale) {
  const std::vector<double> unit(mesh.num_faces(), 1.0);
  std::vector<double> diag(mesh.num_cells());
  for (std::size_t i = 0; i < diag.size(); ++i) diag[i] = diag_scale * mesh.cell(i).volume;
  return assemble_neumann_operator(mesh, unit, diag);
}

inline std::span<const double> warm_start(const Field* guess, const Mesh& mesh) {
  if (guess == nullptr || guess->mesh_id() != mesh.id()) return {};
  return guess->values();
}

}  // namespace detail

/// (-Lap_h + 1) z = f(u) with zero-flux boundary.
inline SignalSolve solve_elliptic_chemical(const Field& u, const ProductionLaw& f, const Mesh& mesh,
                                           const SolverOptions& opt = {}, const Field* guess = nullptr) {
  u.check_on(mesh);
  const auto A = detail::screened_operator(mesh, 1.0);
  auto b = detail::produced(u, f);
  for (std::size_t i = 0; i < b.size(); ++i) b[i] *= mesh.cell(i).volume;
  auto res = solve_spd(A, b, opt, detail::warm_start(guess, mesh));
  return {Field(mesh, std::move(res.x)), res.iterations, res.relative_residual};
}

/// One backward-Euler step of z_t = Lap z - z + f(u).
inline SignalSolve step_parabolic_chemical(const Field& z_old, const Field& u, const ProductionLaw& f, const Mesh& mesh,
                                           double dt, const SolverOptions& opt = {}) {
  if (!(dt > 0.0)) throw std::invalid_argument("chemical step: dt must be positive");
  u.check_on(mesh);
  z_old.check_on(mesh);
  const auto A = detail::screened_operator(mesh, 1.0 + 1.0 / dt);
  auto b = detail::produced(u, f);
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = mesh.cell(i).volume * (z_old[i] / dt + b[i]);
  auto res = solve_spd(A, b, opt, z_old.values());
  return {Field(mesh, std::move(res.x)), res.iterations, res.relative_residual};
}

/// -Lap_h z = f(u) - mean f(u); the result has zero volume-weighted mean.
inline SignalSolve solve_nonlocal_chemical(const Field& u, const ProductionLaw& f, const Mesh& mesh,
                                           const SolverOptions& opt = {}, const Field* guess = nullptr) {
  u.check_on(mesh);
  const auto A = detail::screened_operator(mesh, 0.0);
  auto s = detail::produced(u, f);
  double mean = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) mean += s[i] * mesh.cell(i).volume;
  mean /= mesh.domain_volume();
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = mesh.cell(i).volume * (s[i] - mean);
  const auto volumes = mesh.volumes();
  auto res = solve_zero_mean(A, s, volumes, opt, detail::warm_start(guess, mesh));
  return {Field(mesh, std::move(res.x)), res.iterations, res.relative_residual};
}

}  // namespace chemotaxis
