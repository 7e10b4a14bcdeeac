#pragma once

#include <array>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace chemotaxis {

using Vec3 = std::array<double, 3>;

struct Cell {
  Vec3 center{};
  double volume = 0.0;
};

/// Interior face between two cells; the normal points from owner to neighbor.
struct Face {
  std::size_t owner = 0;
  std::size_t neighbor = 0;
  double area = 0.0;
  Vec3 normal{};
  double distance = 0.0;
};

/// Cell-centred finite-volume geometry. Only interior faces are stored, so every
/// operator assembled on it has zero flux through the domain boundary.
class Mesh {
 public:
  Mesh(int dim, std::vector<Cell> cells, std::vector<Face> faces, Vec3 spacing)
      : dim_(dim), cells_(std::move(cells)), faces_(std::move(faces)), spacing_(spacing), id_(next_id()) {
    if (dim_ < 1 || dim_ > 3) throw std::invalid_argument("mesh dimension must be 1, 2 or 3");
    if (cells_.empty()) throw std::invalid_argument("mesh has no cells");
    for (const auto& c : cells_)
      if (!(c.volume > 0.0)) throw std::invalid_argument("cell volume must be positive");
    for (const auto& f : faces_) {
      if (f.owner >= cells_.size() || f.neighbor >= cells_.size() || f.owner == f.neighbor)
        throw std::invalid_argument("face must connect two distinct existing cells");
      const double len = std::sqrt(f.normal[0] * f.normal[0] + f.normal[1] * f.normal[1] + f.normal[2] * f.normal[2]);
      if (std::abs(len - 1.0) > 1e-12) throw std::invalid_argument("face normal must be unit length");
      if (!(f.distance > 0.0) || !(f.area > 0.0)) throw std::invalid_argument("face distance and area must be positive");
    }
    h_ = 0.0;
    for (int a = 0; a < dim_; ++a) h_ = std::max(h_, spacing_[a]);
    domain_volume_ = 0.0;
    for (const auto& c : cells_) domain_volume_ += c.volume;
    build_adjacency();
  }

  int dim() const { return dim_; }
  std::size_t num_cells() const { return cells_.size(); }
  std::size_t num_faces() const { return faces_.size(); }
  const std::vector<Cell>& cells() const { return cells_; }
  const std::vector<Face>& faces() const { return faces_; }
  const Cell& cell(std::size_t i) const { return cells_[i]; }
  const Face& face(std::size_t f) const { return faces_[f]; }
  double h() const { return h_; }
  const Vec3& spacing() const { return spacing_; }
  double domain_volume() const { return domain_volume_; }
  std::uint64_t id() const { return id_; }

  /// Indices of the faces touching cell i.
  std::span<const std::size_t> cell_faces(std::size_t i) const {
    return {adjacency_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }

  std::size_t other_cell(std::size_t f, std::size_t i) const {
    return faces_[f].owner == i ? faces_[f].neighbor : faces_[f].owner;
  }

  std::vector<double> volumes() const {
    std::vector<double> v(cells_.size());
    for (std::size_t i = 0; i < cells_.size(); ++i) v[i] = cells_[i].volume;
    return v;
  }

 private:
  static std::uint64_t next_id() {
    static std::atomic<std::uint64_t> counter{1};
    return counter++;
  }

  void build_adjacency() {
    offsets_.assign(cells_.size() + 1, 0);
    for (const auto& f : faces_) {
      ++offsets_[f.owner + 1];
      ++offsets_[f.neighbor + 1];
    }
    for (std::size_t i = 0; i < cells_.size(); ++i) offsets_[i + 1] += offsets_[i];
    adjacency_.resize(offsets_.back());
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (std::size_t fi = 0; fi < faces_.size(); ++fi) {
      adjacency_[fill[faces_[fi].owner]++] = fi;
      adjacency_[fill[faces_[fi].neighbor]++] = fi;
    }
  }

  int dim_;
  std::vector<Cell> cells_;
  std::vector<Face> faces_;
  Vec3 spacing_;
  std::uint64_t id_;
  double h_ = 0.0;
  double domain_volume_ = 0.0;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> adjacency_;
};

namespace detail {

// Cartesian lattice over [lo, lo + n*dx] per axis, keeping the cells accepted by `keep`.
template <class Keep>
Mesh lattice_mesh(int dim, const Vec3& lo, const std::array<std::size_t, 3>& count, const Vec3& dx, Keep&& keep) {
  const std::size_t total = count[0] * count[1] * count[2];
  constexpr std::size_t kDropped = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(total, kDropped);
  std::vector<Cell> cells;
  double volume = 1.0;
  for (int a = 0; a < dim; ++a) volume *= dx[a];

  auto linear = [&](std::size_t i, std::size_t j, std::size_t k) { return (k * count[1] + j) * count[0] + i; };
  for (std::size_t k = 0; k < count[2]; ++k)
    for (std::size_t j = 0; j < count[1]; ++j)
      for (std::size_t i = 0; i < count[0]; ++i) {
        Vec3 x{lo[0] + (i + 0.5) * dx[0], dim > 1 ? lo[1] + (j + 0.5) * dx[1] : 0.0,
               dim > 2 ? lo[2] + (k + 0.5) * dx[2] : 0.0};
        if (!keep(x)) continue;
        index[linear(i, j, k)] = cells.size();
        cells.push_back({x, volume});
      }

  std::vector<Face> faces;
  for (std::size_t k = 0; k < count[2]; ++k)
    for (std::size_t j = 0; j < count[1]; ++j)
      for (std::size_t i = 0; i < count[0]; ++i) {
        const std::size_t a = index[linear(i, j, k)];
        if (a == kDropped) continue;
        const std::array<std::size_t, 3> ijk{i, j, k};
        for (int axis = 0; axis < dim; ++axis) {
          if (ijk[axis] + 1 >= count[axis]) continue;
          auto next = ijk;
          ++next[axis];
          const std::size_t b = index[linear(next[0], next[1], next[2])];
          if (b == kDropped) continue;
          double area = 1.0;
          for (int other = 0; other < dim; ++other)
            if (other != axis) area *= dx[other];
          Vec3 normal{};
          normal[axis] = 1.0;
          faces.push_back({a, b, area, normal, dx[axis]});
        }
      }
  return Mesh(dim, std::move(cells), std::move(faces), dx);
}

}  // namespace detail

/// Uniform Cartesian mesh of [0, L_0] x ... with at least two cells per axis.
inline Mesh build_box_mesh(int dim, std::span<const double> lengths, std::span<const std::size_t> cells_per_axis) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("box mesh: dimension must be 1, 2 or 3");
  if (lengths.size() != static_cast<std::size_t>(dim) || cells_per_axis.size() != static_cast<std::size_t>(dim))
    throw std::invalid_argument("box mesh: need one length and one cell count per axis");
  Vec3 dx{1.0, 1.0, 1.0};
  std::array<std::size_t, 3> count{1, 1, 1};
  for (int a = 0; a < dim; ++a) {
    if (!(lengths[a] > 0.0)) throw std::invalid_argument("box mesh: lengths must be positive");
    if (cells_per_axis[a] < 2) throw std::invalid_argument("box mesh: need at least 2 cells per axis");
    count[a] = cells_per_axis[a];
    dx[a] = lengths[a] / static_cast<double>(cells_per_axis[a]);
  }
  return detail::lattice_mesh(dim, Vec3{0, 0, 0}, count, dx, [](const Vec3&) { return true; });
}

/// Staircase disk (dim 2) or ball (dim 3) centred at the origin: the cells of a
/// Cartesian grid over the bounding box whose centres lie strictly inside. The
/// per-axis count is odd, so one cell is centred on the origin.
inline Mesh build_ball_mesh(int dim, double radius, double h_target) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("ball mesh: dimension must be 2 or 3");
  if (!(radius > 0.0)) throw std::invalid_argument("ball mesh: radius must be positive");
  if (!(h_target > 0.0) || !(h_target < radius / 4.0)) throw std::invalid_argument("ball mesh: h too coarse (need h < radius/4)");
  auto n = static_cast<std::size_t>(std::ceil(2.0 * radius / h_target - 1e-9));
  if (n % 2 == 0) ++n;
  const double dx = 2.0 * radius / static_cast<double>(n);
  std::array<std::size_t, 3> count{n, n, dim == 3 ? n : 1};
  const double r2 = radius * radius;
  Mesh mesh = detail::lattice_mesh(dim, Vec3{-radius, -radius, -radius}, count, Vec3{dx, dx, dim == 3 ? dx : 1.0},
                                   [r2](const Vec3& x) { return x[0] * x[0] + x[1] * x[1] + x[2] * x[2] < r2; });
  if (mesh.num_cells() < 25) throw std::invalid_argument("ball mesh: h too coarse (fewer than 25 cells)");
  return mesh;
}

inline std::string mesh_summary(const Mesh& m) {
  return "cells=" + std::to_string(m.num_cells()) + " faces=" + std::to_string(m.num_faces()) +
         " h=" + std::to_string(m.h()) + " domain_volume=" + std::to_string(m.domain_volume());
}

}  // namespace chemotaxis
