#include <algorithm>
#include <cmath>
#include <string>

#include "fracstep/numkit.hpp"

namespace fracstep::numkit {

SparseMatrix SparseMatrix::from_triplets(std::size_t n_rows, std::size_t n_cols, std::vector<Triplet> entries) {
  for (const auto& t : entries) {
    if (t.row < 0 || t.col < 0 || static_cast<std::size_t>(t.row) >= n_rows ||
        static_cast<std::size_t>(t.col) >= n_cols)
      throw ConfigError("triplet index out of range");
  }
  std::sort(entries.begin(), entries.end(),
            [](const Triplet& a, const Triplet& b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });

  SparseMatrix m;
  m.n_rows_ = n_rows;
  m.n_cols_ = n_cols;
  m.row_offsets_.assign(n_rows + 1, 0);
  for (std::size_t k = 0; k < entries.size();) {
    const Triplet& first = entries[k];
    double sum = 0.0;
    std::size_t j = k;
    for (; j < entries.size() && entries[j].row == first.row && entries[j].col == first.col; ++j)
      sum += entries[j].value;
    m.col_indices_.push_back(first.col);
    m.values_.push_back(sum);
    ++m.row_offsets_[static_cast<std::size_t>(first.row) + 1];
    k = j;
  }
  for (std::size_t r = 0; r < n_rows; ++r) m.row_offsets_[r + 1] += m.row_offsets_[r];
  return m;
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  std::vector<Triplet> t;
  t.reserve(n);
  for (std::size_t i = 0; i < n; ++i) t.push_back({static_cast<Index>(i), static_cast<Index>(i), 1.0});
  return from_triplets(n, n, std::move(t));
}

double SparseMatrix::at(std::size_t i, std::size_t j) const noexcept {
  const auto begin = col_indices_.begin() + row_offsets_[i];
  const auto end = col_indices_.begin() + row_offsets_[i + 1];
  const auto it = std::lower_bound(begin, end, static_cast<Index>(j));
  if (it == end || *it != static_cast<Index>(j)) return 0.0;
  return values_[static_cast<std::size_t>(it - col_indices_.begin())];
}

Vector SparseMatrix::diagonal() const {
  Vector d(std::min(n_rows_, n_cols_), 0.0);
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = at(i, i);
  return d;
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != n_cols_ || y.size() != n_rows_) throw ConfigError("sparse multiply: dimension mismatch");
  kernels::spmv(view(), x, y);
}

Vector SparseMatrix::operator*(std::span<const double> x) const {
  Vector y(n_rows_, 0.0);
  multiply(x, y);
  return y;
}

bool SparseMatrix::same_pattern(const SparseMatrix& other) const noexcept {
  return n_rows_ == other.n_rows_ && n_cols_ == other.n_cols_ && row_offsets_ == other.row_offsets_ &&
         col_indices_ == other.col_indices_;
}

SparseMatrix SparseMatrix::combine(double a, const SparseMatrix& A, double b, const SparseMatrix& B) {
  if (!A.same_pattern(B)) throw ConfigError("combine requires identical sparsity patterns");
  SparseMatrix c = A;
  for (std::size_t k = 0; k < c.values_.size(); ++k) c.values_[k] = a * A.values_[k] + b * B.values_[k];
  return c;
}

bool SparseMatrix::is_symmetric(double tol) const {
  if (n_rows_ != n_cols_) return false;
  double scale = 0.0;
  for (double v : values_) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < n_rows_; ++i) {
    for (Index k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      const auto j = static_cast<std::size_t>(col_indices_[static_cast<std::size_t>(k)]);
      if (std::abs(values_[static_cast<std::size_t>(k)] - at(j, i)) > tol * scale) return false;
    }
  }
  return true;
}

double norm2(std::span<const double> x) { return std::sqrt(kernels::dot(x, x)); }

namespace {

// Runs preconditioned CG on A x = b from the current x until the recursive
// residual drops below target or the budget is spent. Returns iterations used.
std::size_t pcg_run(const SparseMatrix& a, std::span<const double> b, std::span<const double> inv_diag,
                    double target, std::size_t budget, Vector& x) {
  const std::size_t n = x.size();
  Vector r(n), z(n), p(n), q(n);
  a.multiply(x, q);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - q[i];
  if (norm2(r) <= target) return 0;
  for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
  p = z;
  double rz = kernels::dot(r, z);
  std::size_t iter = 0;
  while (iter < budget) {
    a.multiply(p, q);
    const double pq = kernels::dot(p, q);
    if (!(pq > 0.0)) throw NumericalError("cg_solve: matrix is not positive definite", norm2(r));
    const double step = rz / pq;
    kernels::axpy(step, p, x);
    kernels::axpy(-step, q, r);
    ++iter;
    if (norm2(r) <= target) break;
    for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    const double rz_next = kernels::dot(r, z);
    kernels::xpby(z, rz_next / rz, p);
    rz = rz_next;
  }
  return iter;
}

double residual_norm(const SparseMatrix& a, std::span<const double> b, std::span<const double> x) {
  Vector q = a * x;
  for (std::size_t i = 0; i < q.size(); ++i) q[i] = b[i] - q[i];
  return norm2(q);
}

}  // namespace

CgResult cg_solve(const SparseMatrix& a, std::span<const double> b, const CgOptions& options,
                  std::span<const double> x0) {
  const std::size_t n = a.n_rows();
  if (a.n_cols() != n || b.size() != n) throw ConfigError("cg_solve: dimension mismatch");
  if (!(options.rel_tol > 0.0)) throw ConfigError("cg_solve: rel_tol must be positive");
  const std::size_t max_iter = options.max_iter == 0 ? 10 * std::max<std::size_t>(n, 1) : options.max_iter;

  CgResult result;
  result.x.assign(n, 0.0);
  const double b_norm = norm2(b);
  if (b_norm == 0.0) return result;
  if (!x0.empty()) {
    if (x0.size() != n) throw ConfigError("cg_solve: warm start has wrong length");
    std::copy(x0.begin(), x0.end(), result.x.begin());
  }

  Vector inv_diag = a.diagonal();
  for (double& d : inv_diag) {
    if (!(d > 0.0)) throw NumericalError("cg_solve: matrix has a non-positive diagonal entry");
    d = 1.0 / d;
  }

  const double target = options.rel_tol * b_norm;
  std::size_t used = pcg_run(a, b, inv_diag, target, max_iter, result.x);
  double true_norm = residual_norm(a, b, result.x);
  // Restarts from x while the true residual exceeds the target.
  for (int restart = 0; restart < 3 && true_norm > target && used < max_iter; ++restart) {
    used += pcg_run(a, b, inv_diag, 0.5 * target, max_iter - used, result.x);
    true_norm = residual_norm(a, b, result.x);
  }
  result.iterations = used;
  result.relative_residual = true_norm / b_norm;
  if (true_norm > target)
    throw NumericalError("cg_solve: no convergence within " + std::to_string(max_iter) +
                             " iterations, relative residual " + std::to_string(result.relative_residual),
                         result.relative_residual);
  return result;
}

}  // namespace fracstep::numkit
