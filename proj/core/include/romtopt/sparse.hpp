#pragma once

#include "romtopt/types.hpp"

#include <Eigen/SparseCore>

#include <memory>
#include <span>
#include <vector>

namespace romtopt {

/// Symmetric sparse matrix stored with both triangles, compressed column format.
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

/// Fixed sparsity pattern of an element-by-element assembly.
///
/// Each element contributes a dense k x k block through its scatter map;
/// negative entries in a scatter map mark eliminated (Dirichlet) dofs, whose
/// rows and columns are dropped. The position of every element entry in the
/// compressed value array is precomputed, so assembly is a single pass over
/// the elements in a fixed order and results are bit-stable.
class AssemblyPattern {
 public:
  /// `scatter` holds `elem_count * dofs_per_elem` global indices, element-major.
  AssemblyPattern(int size, int dofs_per_elem, std::span<const int> scatter);

  int size() const { return size_; }
  int elem_count() const { return elem_count_; }
  int dofs_per_elem() const { return k_; }
  std::span<const int> element_scatter(int e) const {
    return {scatter_.data() + static_cast<std::size_t>(e) * k_, static_cast<std::size_t>(k_)};
  }

  /// Sum over elements of scales[e] * elem_matrix scattered into the global matrix.
  SparseMatrix assemble(const Matrix& elem_matrix, std::span<const double> scales) const;

 private:
  int size_;
  int k_;
  int elem_count_;
  std::vector<int> scatter_;
  std::vector<int> slots_;  // per element entry: index into the value array, -1 if dropped
  SparseMatrix structure_;
};

/// Fill-reducing (AMD) ordering plus symbolic Cholesky factor of a sparsity pattern.
///
/// Immutable once built; numeric factorizations of matrices sharing the
/// pattern reuse it.
class SymbolicFactorization {
 public:
  explicit SymbolicFactorization(const SparseMatrix& A);
  ~SymbolicFactorization();
  SymbolicFactorization(const SymbolicFactorization&) = delete;
  SymbolicFactorization& operator=(const SymbolicFactorization&) = delete;

  bool matches(const SparseMatrix& A) const;
  int size() const { return n_; }

 private:
  friend class SpdFactorization;
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int n_;
  std::vector<int> outer_;
  std::vector<int> inner_;
};

/// Sparse Cholesky factorization L L^T = P A P^T of an SPD matrix.
///
/// Throws IndefiniteMatrixError when a pivot is non-positive or negligible
/// relative to the matching diagonal entry (a rigid-body mode left by missing
/// Dirichlet conditions). Immutable after construction; `solve` is reentrant.
class SpdFactorization {
 public:
  explicit SpdFactorization(const SparseMatrix& A,
                            std::shared_ptr<const SymbolicFactorization> symbolic = nullptr);
  ~SpdFactorization();
  SpdFactorization(SpdFactorization&&) noexcept;
  SpdFactorization& operator=(SpdFactorization&&) noexcept;
  SpdFactorization(const SpdFactorization&) = delete;
  SpdFactorization& operator=(const SpdFactorization&) = delete;

  int size() const { return n_; }
  Vector solve(const Vector& rhs) const;
  /// Smallest ratio pivot / diagonal entry observed during the factorization.
  double min_pivot_ratio() const { return min_pivot_ratio_; }
  /// Nonzeros in the Cholesky factor.
  long factor_nonzeros() const;
  const std::shared_ptr<const SymbolicFactorization>& symbolic() const { return symbolic_; }

  /// Pivot ratio below which the matrix is reported as numerically singular.
  static constexpr double kSingularPivotRatio = 1e-12;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::shared_ptr<const SymbolicFactorization> symbolic_;
  int n_ = 0;
  double min_pivot_ratio_ = 0.0;
};

SpdFactorization factorize(const SparseMatrix& A,
                           std::shared_ptr<const SymbolicFactorization> symbolic = nullptr);
inline Vector solve(const SpdFactorization& F, const Vector& rhs) { return F.solve(rhs); }

}  // namespace romtopt
