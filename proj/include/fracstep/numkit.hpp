#pragma once

// Small linear-algebra toolkit: compressed-row sparse matrices with a
// Jacobi-preconditioned conjugate gradient solver, dense symmetric matrices
// with Cholesky and a cyclic Jacobi generalized eigensolver.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fracstep/errors.hpp"
#include "fracstep/kernels.hpp"

namespace fracstep::numkit {

using Index = kernels::Index;
using Vector = std::vector<double>;

struct Triplet {
  Index row;
  Index col;
  double value;
};

class SparseMatrix {
 public:
  SparseMatrix() = default;

  /// Sums duplicate entries; explicit zeros are kept.
  static SparseMatrix from_triplets(std::size_t n_rows, std::size_t n_cols, std::vector<Triplet> entries);
  static SparseMatrix identity(std::size_t n);

  std::size_t n_rows() const noexcept { return n_rows_; }
  std::size_t n_cols() const noexcept { return n_cols_; }
  std::size_t nnz() const noexcept { return values_.size(); }

  std::span<const Index> row_offsets() const noexcept { return row_offsets_; }
  std::span<const Index> col_indices() const noexcept { return col_indices_; }
  std::span<const double> values() const noexcept { return values_; }

  /// Entry (i,j), zero when outside the pattern.
  double at(std::size_t i, std::size_t j) const noexcept;
  Vector diagonal() const;

  void multiply(std::span<const double> x, std::span<double> y) const;
  Vector operator*(std::span<const double> x) const;

  /// a*A + b*B for matrices with identical sparsity pattern.
  static SparseMatrix combine(double a, const SparseMatrix& A, double b, const SparseMatrix& B);

  bool same_pattern(const SparseMatrix& other) const noexcept;
  /// True when the pattern and values are symmetric up to tol * max|a_ij|.
  bool is_symmetric(double tol = 1e-14) const;

  kernels::CsrView view() const noexcept {
    return {n_rows_, row_offsets_.data(), col_indices_.data(), values_.data()};
  }

 private:
  std::size_t n_rows_ = 0;
  std::size_t n_cols_ = 0;
  std::vector<Index> row_offsets_{0};
  std::vector<Index> col_indices_;
  std::vector<double> values_;
};

class DenseSymMatrix {
 public:
  DenseSymMatrix() = default;
  explicit DenseSymMatrix(std::size_t n) : n_(n), entries_(n * n, 0.0) {}

  static DenseSymMatrix from_sparse(const SparseMatrix& a);
  static DenseSymMatrix identity(std::size_t n);

  std::size_t n() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return entries_[i * n_ + j]; }
  /// Writes both (i,j) and (j,i).
  void set(std::size_t i, std::size_t j, double value) noexcept {
    entries_[i * n_ + j] = value;
    entries_[j * n_ + i] = value;
  }
  std::span<const double> row(std::size_t i) const noexcept { return {entries_.data() + i * n_, n_}; }
  std::span<const double> entries() const noexcept { return entries_; }

  Vector operator*(std::span<const double> x) const;
  double max_abs() const noexcept;

 private:
  std::size_t n_ = 0;
  std::vector<double> entries_;
};

struct CgOptions {
  double rel_tol = 1e-12;
  /// Zero selects 10 * n.
  std::size_t max_iter = 0;
};

struct CgResult {
  Vector x;
  std::size_t iterations = 0;
  /// ||Ax - b|| / ||b|| recomputed from the returned x (0 when b = 0).
  double relative_residual = 0.0;
};

/// Jacobi-preconditioned CG for SPD A. `x0`, when non-empty, is the warm start.
/// Throws NumericalError carrying the final relative residual on non-convergence.
CgResult cg_solve(const SparseMatrix& a, std::span<const double> b, const CgOptions& options = {},
                  std::span<const double> x0 = {});

/// Lower-triangular Cholesky factor L (row-major, full storage) with A = L L^T.
/// Throws NumericalError("not positive definite") on a non-positive pivot.
std::vector<double> cholesky_factor(const DenseSymMatrix& a);
Vector cholesky_solve(const DenseSymMatrix& a, std::span<const double> b);

struct EigenBasis {
  Vector values;              // ascending
  std::vector<double> vectors;  // row j holds eigenvector j (length n)
  std::size_t n = 0;

  std::span<const double> vector(std::size_t j) const noexcept { return {vectors.data() + j * n, n}; }
};

struct EigOptions {
  double off_tol = 1e-12;
  std::size_t max_sweeps = 60;
};

/// Solves S phi = lambda M phi for symmetric S and SPD M by Cholesky reduction of
/// M and cyclic Jacobi rotations. Eigenvectors are M-orthonormal.
EigenBasis gen_sym_eig(const DenseSymMatrix& s, const DenseSymMatrix& m, const EigOptions& options = {});

double norm2(std::span<const double> x);

}  // namespace fracstep::numkit
