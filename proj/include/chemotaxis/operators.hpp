#pragma once

#include <cmath>

#include "chemotaxis/field.hpp"
#include "chemotaxis/mesh.hpp"
#include "chemotaxis/model_params.hpp"

namespace chemotaxis {

inline double harmonic_mean(double a, double b) {
  const double s = a + b;
  return s > 0.0 ? 2.0 * a * b / s : 0.0;
}

/// (u+1)^{m-1}
inline double nonlinear_diffusivity(double u, double m) { return m == 1.0 ? 1.0 : std::pow(u + 1.0, m - 1.0); }

/// u (u+1)^{m-1}: the density transported by the chemotactic velocity.
inline double transported_density(double u, double m) { return u * nonlinear_diffusivity(u, m); }

/// Per-face coefficient of the two-point diffusion stencil: harmonic mean of (u+1)^{m1-1}.
inline std::vector<double> diffusion_face_coefficients(const Field& u, const Mesh& mesh, double m1) {
  u.check_on(mesh);
  std::vector<double> coeff(mesh.num_faces(), 1.0);
  if (m1 == 1.0) return coeff;
  for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
    const Face& face = mesh.face(f);
    coeff[f] = harmonic_mean(nonlinear_diffusivity(u[face.owner], m1), nonlinear_diffusivity(u[face.neighbor], m1));
  }
  return coeff;
}

/// Two-point approximation of (u+1)^{m1-1} grad u . n times the face area.
inline FaceFlux diffusive_flux(const Field& u, const Mesh& mesh, double m1) {
  const auto coeff = diffusion_face_coefficients(u, mesh, m1);
  FaceFlux flux(mesh);
  for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
    const Face& face = mesh.face(f);
    flux[f] = face.area * coeff[f] * (u[face.neighbor] - u[face.owner]) / face.distance;
  }
  return flux;
}

/// Face velocity sign * coeff * d(potential)/dn.
inline std::vector<double> chemotactic_velocity(const Field& potential, const Mesh& mesh, int sign, double coeff) {
  potential.check_on(mesh);
  std::vector<double> vel(mesh.num_faces(), 0.0);
  if (coeff == 0.0) return vel;
  for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
    const Face& face = mesh.face(f);
    vel[f] = sign * coeff * (potential[face.neighbor] - potential[face.owner]) / face.distance;
  }
  return vel;
}

/// Upwind transport of u (u+1)^{m-1} with velocity sign * coeff * grad(potential).
/// The transported density is taken whole from the upwind cell, so an empty cell
/// never loses mass.
inline FaceFlux upwind_chemotactic_flux(const Field& u, const Field& potential, const Mesh& mesh, int sign, double m,
                                        double coeff) {
  u.check_on(mesh);
  if (sign != 1 && sign != -1) throw std::invalid_argument("chemotactic sign must be +1 or -1");
  const auto vel = chemotactic_velocity(potential, mesh, sign, coeff);
  FaceFlux flux(mesh);
  for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
    if (vel[f] == 0.0) continue;
    const Face& face = mesh.face(f);
    const std::size_t up = vel[f] >= 0.0 ? face.owner : face.neighbor;
    flux[f] = face.area * vel[f] * transported_density(u[up], m);
  }
  return flux;
}

/// Net outward flux per unit volume: +F/V on the owner, -F/V on the neighbor.
/// The volume-weighted sum vanishes because every face contributes twice with
/// opposite signs.
inline Field divergence(const FaceFlux& flux, const Mesh& mesh) {
  if (flux.mesh_id() != mesh.id()) throw std::invalid_argument("flux is not defined on this mesh");
  Field div(mesh);
  for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
    const Face& face = mesh.face(f);
    div[face.owner] += flux[f];
    div[face.neighbor] -= flux[f];
  }
  for (std::size_t i = 0; i < div.size(); ++i) div[i] /= mesh.cell(i).volume;
  return div;
}

/// |grad u| per cell from a least-squares fit of the directional differences to
/// all neighbours. Cells whose neighbours do not span the space use the largest
/// absolute directional difference instead.
inline Field gradient_magnitude(const Field& u, const Mesh& mesh) {
  u.check_on(mesh);
  const int dim = mesh.dim();
  Field out(mesh);
  for (std::size_t i = 0; i < mesh.num_cells(); ++i) {
    double normal_eq[3][3] = {};
    double rhs[3] = {};
    double max_slope = 0.0;
    const auto faces = mesh.cell_faces(i);
    for (std::size_t f : faces) {
      const Face& face = mesh.face(f);
      const double orient = face.owner == i ? 1.0 : -1.0;
      const double slope = (u[mesh.other_cell(f, i)] - u[i]) / face.distance;
      max_slope = std::max(max_slope, std::abs(slope));
      for (int a = 0; a < dim; ++a) {
        const double ea = orient * face.normal[a];
        rhs[a] += ea * slope;
        for (int b = 0; b < dim; ++b) normal_eq[a][b] += ea * orient * face.normal[b];
      }
    }
    if (faces.size() < static_cast<std::size_t>(dim)) {
      out[i] = max_slope;
      continue;
    }
    // Gaussian elimination with partial pivoting on the dim x dim normal equations.
    double g[3] = {};
    bool singular = false;
    for (int col = 0; col < dim && !singular; ++col) {
      int piv = col;
      for (int r = col + 1; r < dim; ++r)
        if (std::abs(normal_eq[r][col]) > std::abs(normal_eq[piv][col])) piv = r;
      if (std::abs(normal_eq[piv][col]) < 1e-10) {
        singular = true;
        break;
      }
      if (piv != col) {
        for (int b = 0; b < dim; ++b) std::swap(normal_eq[piv][b], normal_eq[col][b]);
        std::swap(rhs[piv], rhs[col]);
      }
      for (int r = col + 1; r < dim; ++r) {
        const double factor = normal_eq[r][col] / normal_eq[col][col];
        for (int b = col; b < dim; ++b) normal_eq[r][b] -= factor * normal_eq[col][b];
        rhs[r] -= factor * rhs[col];
      }
    }
    if (singular) {
      out[i] = max_slope;
      continue;
    }
    for (int r = dim - 1; r >= 0; --r) {
      double s = rhs[r];
      for (int b = r + 1; b < dim; ++b) s -= normal_eq[r][b] * g[b];
      g[r] = s / normal_eq[r][r];
    }
    out[i] = std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2]);
  }
  return out;
}

/// lambda u^rho - mu u^k - c |grad u|^gamma, cellwise.
inline Field source_eval(const Field& u, const Field& grad_mag, const ModelParams& p) {
  if (u.mesh_id() != grad_mag.mesh_id()) throw std::invalid_argument("source_eval: fields on different meshes");
  Field s = u;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double damping = p.c == 0.0 ? 0.0 : p.c * std::pow(grad_mag[i], p.gamma);
    s[i] = p.lambda * std::pow(u[i], p.rho) - p.mu * std::pow(u[i], p.k) - damping;
  }
  return s;
}

}  // namespace chemotaxis
