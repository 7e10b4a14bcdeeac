#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "chemotaxis/mesh.hpp"

namespace chemotaxis {

/// One value per cell, bound to the mesh it was created on.
class Field {
 public:
  Field() = default;
  explicit Field(const Mesh& mesh, double fill = 0.0) : values_(mesh.num_cells(), fill), mesh_id_(mesh.id()) {}
  Field(const Mesh& mesh, std::vector<double> values) : values_(std::move(values)), mesh_id_(mesh.id()) {
    if (values_.size() != mesh.num_cells()) throw std::invalid_argument("field length does not match mesh cell count");
  }

  std::size_t size() const { return values_.size(); }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  std::vector<double>& raw() { return values_; }
  const std::vector<double>& raw() const { return values_; }
  std::uint64_t mesh_id() const { return mesh_id_; }

  void check_on(const Mesh& mesh) const {
    if (mesh_id_ != mesh.id() || values_.size() != mesh.num_cells())
      throw std::invalid_argument("field is not defined on this mesh");
  }

  double max() const { return *std::max_element(values_.begin(), values_.end()); }
  double min() const { return *std::min_element(values_.begin(), values_.end()); }

 private:
  std::vector<double> values_;
  std::uint64_t mesh_id_ = 0;
};

/// One value per interior face: area times the normal component (owner -> neighbor)
/// of a vector field, i.e. the rate carried across the face in that direction.
class FaceFlux {
 public:
  explicit FaceFlux(const Mesh& mesh, double fill = 0.0) : values_(mesh.num_faces(), fill), mesh_id_(mesh.id()) {}

  std::size_t size() const { return values_.size(); }
  double& operator[](std::size_t f) { return values_[f]; }
  double operator[](std::size_t f) const { return values_[f]; }
  std::span<const double> values() const { return values_; }
  std::uint64_t mesh_id() const { return mesh_id_; }

  FaceFlux& operator+=(const FaceFlux& other) {
    if (other.mesh_id_ != mesh_id_) throw std::invalid_argument("face fluxes live on different meshes");
    for (std::size_t f = 0; f < values_.size(); ++f) values_[f] += other.values_[f];
    return *this;
  }

 private:
  std::vector<double> values_;
  std::uint64_t mesh_id_ = 0;
};

/// Sum of value * cell volume.
inline double integrate(const Field& u, const Mesh& mesh) {
  u.check_on(mesh);
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * mesh.cell(i).volume;
  return s;
}

inline double weighted_mean(const Field& u, const Mesh& mesh) { return integrate(u, mesh) / mesh.domain_volume(); }

}  // namespace chemotaxis
