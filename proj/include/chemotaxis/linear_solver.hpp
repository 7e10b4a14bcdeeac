#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "chemotaxis/sparse.hpp"

namespace chemotaxis {

class SolverError : public std::runtime_error {
 public:
  enum class Kind { no_convergence, indefinite_operator, incompatible_rhs };
  SolverError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct SolverOptions {
  double tol = 1e-9;
  int max_iter = 0;  // 0 selects 10 * size
};

struct SolveResult {
  std::vector<double> x;
  int iterations = 0;
  double relative_residual = 0.0;
};

namespace detail {

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

// Removes the volume-weighted mean from x.
inline void project_zero_mean(std::span<double> x, std::span<const double> volumes, double total_volume) {
  const double mean = dot(x, volumes) / total_volume;
  for (double& xi : x) xi -= mean;
}

// Jacobi-preconditioned CG. When `volumes` is non-empty the iterate and search
// direction are kept volume-mean free (deflation of the constant kernel).
inline SolveResult pcg(const SparseOperator& A, std::span<const double> b, const SolverOptions& opt,
                       std::span<const double> x0, std::span<const double> volumes) {
  const std::size_t n = A.size();
  if (b.size() != n) throw std::invalid_argument("solver: right-hand side size mismatch");
  if (!(opt.tol > 0.0)) throw std::invalid_argument("solver: tol must be positive");
  const int max_iter = opt.max_iter > 0 ? opt.max_iter : static_cast<int>(10 * n);
  const bool deflate = !volumes.empty();
  double total_volume = 0.0;
  for (double v : volumes) total_volume += v;

  SolveResult res;
  res.x.assign(n, 0.0);
  if (!x0.empty()) res.x.assign(x0.begin(), x0.end());
  if (deflate) project_zero_mean(res.x, volumes, total_volume);

  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    res.x.assign(n, 0.0);
    return res;
  }

  std::vector<double> r(n), z(n), p(n), Ap(n);
  A.multiply(res.x, Ap);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - Ap[i];
  const auto diag = A.diagonal();
  std::vector<double> inv_diag(n);
  for (std::size_t i = 0; i < n; ++i) inv_diag[i] = diag[i] > 0.0 ? 1.0 / diag[i] : 1.0;

  double rnorm = norm2(r);
  if (rnorm <= opt.tol * bnorm) {
    res.relative_residual = rnorm / bnorm;
    return res;
  }
  for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
  p = z;
  if (deflate) project_zero_mean(p, volumes, total_volume);
  double rz = dot(r, z);

  for (int it = 1; it <= max_iter; ++it) {
    A.multiply(p, Ap);
    const double curvature = dot(p, Ap);
    if (!(curvature > 0.0))
      throw SolverError(SolverError::Kind::indefinite_operator, "indefinite operator: nonpositive curvature in CG");
    const double step = rz / curvature;
    for (std::size_t i = 0; i < n; ++i) {
      res.x[i] += step * p[i];
      r[i] -= step * Ap[i];
    }
    if (deflate) project_zero_mean(res.x, volumes, total_volume);
    rnorm = norm2(r);
    if (rnorm <= opt.tol * bnorm) {
      // Confirm against the true residual; recursion drift can understate it.
      A.multiply(res.x, Ap);
      for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - Ap[i];
      rnorm = norm2(r);
      if (rnorm <= opt.tol * bnorm) {
        res.iterations = it;
        res.relative_residual = rnorm / bnorm;
        return res;
      }
    }
    for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    const double rz_next = dot(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    if (deflate) project_zero_mean(p, volumes, total_volume);
  }
  throw SolverError(SolverError::Kind::no_convergence,
                    "no convergence after " + std::to_string(max_iter) + " iterations (relative residual " +
                        std::to_string(rnorm / bnorm) + ")");
}

}  // namespace detail

/// CG with diagonal preconditioning for symmetric positive definite A.
inline SolveResult solve_spd(const SparseOperator& A, std::span<const double> b, const SolverOptions& opt = {},
                             std::span<const double> x0 = {}) {
  return detail::pcg(A, b, opt, x0, {});
}

/// Solves A x = b for A symmetric positive semidefinite whose kernel is the
/// constants (pure Neumann operator). The returned x has zero volume-weighted
/// mean. Compatibility means b sums to zero, since A^T annihilates constants;
/// the round-off part of that sum is removed before iterating.
inline SolveResult solve_zero_mean(const SparseOperator& A, std::span<const double> b, std::span<const double> volumes,
                                   const SolverOptions& opt = {}, std::span<const double> x0 = {}) {
  const std::size_t n = A.size();
  if (volumes.size() != n) throw std::invalid_argument("solver: volume vector size mismatch");
  double sum = 0.0, sup = 0.0;
  for (double bi : b) {
    sum += bi;
    sup = std::max(sup, std::abs(bi));
  }
  const double mean = sum / static_cast<double>(n);
  if (std::abs(mean) > 1e-8 * sup)
    throw SolverError(SolverError::Kind::incompatible_rhs, "incompatible right-hand side: nonzero mean");
  std::vector<double> centred(b.begin(), b.end());
  for (double& bi : centred) bi -= mean;
  return detail::pcg(A, centred, opt, x0, volumes);
}

}  // namespace chemotaxis
