#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "chemotaxis/mesh.hpp"

namespace chemotaxis {

/// Square matrix in compressed-row storage.
class SparseOperator {
 public:
  struct Entry {
    std::size_t row, col;
    double value;
  };

  SparseOperator() = default;

  /// Duplicate (row, col) entries are summed.
  static SparseOperator from_entries(std::size_t n, std::vector<Entry> entries) {
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return std::tie(a.row, a.col) < std::tie(b.row, b.col); });
    SparseOperator A;
    A.n_ = n;
    A.offsets_.assign(n + 1, 0);
    std::size_t last_row = static_cast<std::size_t>(-1);
    for (const auto& e : entries) {
      if (e.row >= n || e.col >= n) throw std::out_of_range("sparse entry outside the matrix");
      if (!A.cols_.empty() && last_row == e.row && A.cols_.back() == e.col) {
        A.vals_.back() += e.value;
        continue;
      }
      A.cols_.push_back(e.col);
      A.vals_.push_back(e.value);
      last_row = e.row;
      ++A.offsets_[e.row + 1];
    }
    for (std::size_t i = 0; i < n; ++i) A.offsets_[i + 1] += A.offsets_[i];
    return A;
  }

  std::size_t size() const { return n_; }
  std::size_t nonzeros() const { return vals_.size(); }
  std::span<const std::size_t> row_offsets() const { return offsets_; }
  std::span<const std::size_t> col_indices() const { return cols_; }
  std::span<const double> values() const { return vals_; }

  void multiply(std::span<const double> x, std::span<double> y) const {
    for (std::size_t i = 0; i < n_; ++i) {
      double s = 0.0;
      for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) s += vals_[k] * x[cols_[k]];
      y[i] = s;
    }
  }

  std::vector<double> diagonal() const {
    std::vector<double> d(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k)
        if (cols_[k] == i) d[i] += vals_[k];
    return d;
  }

  double at(std::size_t i, std::size_t j) const {
    for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k)
      if (cols_[k] == j) return vals_[k];
    return 0.0;
  }

  /// max |a_ij - a_ji| relative to max |a|.
  double asymmetry() const {
    double worst = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) {
        scale = std::max(scale, std::abs(vals_[k]));
        worst = std::max(worst, std::abs(vals_[k] - at(cols_[k], i)));
      }
    return scale > 0.0 ? worst / scale : 0.0;
  }

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::size_t> cols_;
  std::vector<double> vals_;
};

/// Integrated zero-flux operator: row i holds diag_i + sum_f coeff_f A_f/d_f on the
/// diagonal and -coeff_f A_f/d_f towards each neighbour. With diag = 0 this is the
/// volume-integrated negative Neumann Laplacian (symmetric, constants in the kernel).
inline SparseOperator assemble_neumann_operator(const Mesh& mesh, std::span<const double> face_coeff,
                                                std::span<const double> diag) {
  if (face_coeff.size() != mesh.num_faces() || diag.size() != mesh.num_cells())
    throw std::invalid_argument("operator assembly: coefficient sizes do not match the mesh");
  std::vector<SparseOperator::Entry> entries;
  entries.reserve(mesh.num_cells() + 4 * mesh.num_faces());
  for (std::size_t i = 0; i < mesh.num_cells(); ++i) entries.push_back({i, i, diag[i]});
  for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
    const Face& face = mesh.face(f);
    const double t = face_coeff[f] * face.area / face.distance;
    entries.push_back({face.owner, face.owner, t});
    entries.push_back({face.neighbor, face.neighbor, t});
    entries.push_back({face.owner, face.neighbor, -t});
    entries.push_back({face.neighbor, face.owner, -t});
  }
  return SparseOperator::from_entries(mesh.num_cells(), std::move(entries));
}

}  // namespace chemotaxis
