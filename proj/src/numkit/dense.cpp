#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "fracstep/numkit.hpp"
#include "fracstep/quadrature.hpp"

namespace fracstep::numkit {

DenseSymMatrix DenseSymMatrix::from_sparse(const SparseMatrix& a) {
  if (a.n_rows() != a.n_cols()) throw ConfigError("from_sparse: matrix is not square");
  if (!a.is_symmetric(1e-12)) throw ConfigError("from_sparse: matrix is not symmetric");
  DenseSymMatrix d(a.n_rows());
  const auto offsets = a.row_offsets();
  const auto cols = a.col_indices();
  const auto vals = a.values();
  for (std::size_t i = 0; i < a.n_rows(); ++i)
    for (Index k = offsets[i]; k < offsets[i + 1]; ++k)
      d.entries_[i * d.n_ + static_cast<std::size_t>(cols[static_cast<std::size_t>(k)])] =
          vals[static_cast<std::size_t>(k)];
  return d;
}

DenseSymMatrix DenseSymMatrix::identity(std::size_t n) {
  DenseSymMatrix d(n);
  for (std::size_t i = 0; i < n; ++i) d.entries_[i * n + i] = 1.0;
  return d;
}

Vector DenseSymMatrix::operator*(std::span<const double> x) const {
  if (x.size() != n_) throw ConfigError("dense multiply: dimension mismatch");
  Vector y(n_);
  for (std::size_t i = 0; i < n_; ++i) y[i] = kernels::dot(row(i), x);
  return y;
}

double DenseSymMatrix::max_abs() const noexcept {
  double m = 0.0;
  for (double v : entries_) m = std::max(m, std::abs(v));
  return m;
}

std::vector<double> cholesky_factor(const DenseSymMatrix& a) {
  const std::size_t n = a.n();
  std::vector<double> l(n * n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l[j * n + k] * l[j * n + k];
    if (!(d > 0.0)) throw NumericalError("not positive definite", d);
    const double ljj = std::sqrt(d);
    l[j * n + j] = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l[i * n + k] * l[j * n + k];
      l[i * n + j] = s / ljj;
    }
  }
  return l;
}

namespace {

void forward_solve(const std::vector<double>& l, std::size_t n, std::span<double> x) {
  for (std::size_t i = 0; i < n; ++i) {
    double s = x[i];
    for (std::size_t k = 0; k < i; ++k) s -= l[i * n + k] * x[k];
    x[i] = s / l[i * n + i];
  }
}

// Solves L^T x = b in place.
void backward_solve(const std::vector<double>& l, std::size_t n, std::span<double> x) {
  for (std::size_t ii = n; ii-- > 0;) {
    double s = x[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= l[k * n + ii] * x[k];
    x[ii] = s / l[ii * n + ii];
  }
}

}  // namespace

Vector cholesky_solve(const DenseSymMatrix& a, std::span<const double> b) {
  if (b.size() != a.n()) throw ConfigError("cholesky_solve: dimension mismatch");
  const auto l = cholesky_factor(a);
  Vector x(b.begin(), b.end());
  forward_solve(l, a.n(), x);
  backward_solve(l, a.n(), x);
  return x;
}

EigenBasis gen_sym_eig(const DenseSymMatrix& s, const DenseSymMatrix& m, const EigOptions& options) {
  const std::size_t n = s.n();
  if (m.n() != n) throw ConfigError("gen_sym_eig: dimension mismatch");
  std::vector<double> l;
  try {
    l = cholesky_factor(m);
  } catch (const NumericalError& e) {
    throw NumericalError("mass matrix not PD", e.achieved());
  }

  // C = L^{-1} S L^{-T}: first W = L^{-1} S (column by column via rows of S,
  // which equal its columns), then C = L^{-1} W^T.
  std::vector<double> c(n * n);
  {
    std::vector<double> w(n * n);
    Vector col(n);
    for (std::size_t j = 0; j < n; ++j) {
      std::copy_n(s.row(j).data(), n, col.data());
      forward_solve(l, n, col);
      for (std::size_t i = 0; i < n; ++i) w[j * n + i] = col[i];  // w row j = (L^{-1} S e_j)
    }
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < n; ++i) col[i] = w[i * n + j];
      forward_solve(l, n, col);
      for (std::size_t i = 0; i < n; ++i) c[j * n + i] = col[i];
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const double avg = 0.5 * (c[i * n + j] + c[j * n + i]);
        c[i * n + j] = avg;
        c[j * n + i] = avg;
      }
  }

  std::vector<double> vt(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) vt[i * n + i] = 1.0;

  auto off_norm = [&] {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += c[i * n + j] * c[i * n + j];
    return std::sqrt(2.0 * off);
  };
  double frob = 0.0;
  for (double v : c) frob += v * v;
  frob = std::sqrt(frob);

  std::size_t sweep = 0;
  double off = off_norm();
  while (off > options.off_tol * frob) {
    if (sweep++ >= options.max_sweeps)
      throw NumericalError("gen_sym_eig: Jacobi sweeps did not converge", off / frob);
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = c[p * n + q];
        const double app = c[p * n + p];
        const double aqq = c[q * n + q];
        if (std::abs(apq) <= 1e-300 || std::abs(apq) < 1e-18 * (std::abs(app) + std::abs(aqq))) {
          c[p * n + q] = c[q * n + p] = 0.0;
          continue;
        }
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double cs = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * cs;
        std::span<double> row_p(c.data() + p * n, n);
        std::span<double> row_q(c.data() + q * n, n);
        kernels::rotate(row_p, row_q, cs, sn);
        for (std::size_t k = 0; k < n; ++k) {
          c[k * n + p] = row_p[k];
          c[k * n + q] = row_q[k];
        }
        c[p * n + p] = app - t * apq;
        c[q * n + q] = aqq + t * apq;
        c[p * n + q] = c[q * n + p] = 0.0;
        kernels::rotate({vt.data() + p * n, n}, {vt.data() + q * n, n}, cs, sn);
      }
    }
    off = off_norm();
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return c[a * n + a] < c[b * n + b]; });

  EigenBasis basis;
  basis.n = n;
  basis.values.resize(n);
  basis.vectors.resize(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t src = order[j];
    basis.values[j] = c[src * n + src];
    std::span<double> phi(basis.vectors.data() + j * n, n);
    std::copy_n(vt.data() + src * n, n, phi.data());
    backward_solve(l, n, phi);
  }
  return basis;
}

const GaussLegendreRule& gauss_legendre20() {
  static const GaussLegendreRule rule = [] {
    GaussLegendreRule r;
    constexpr std::size_t n = GaussLegendreRule::kPoints;
    for (std::size_t i = 0; i < n; ++i) {
      double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (std::size_t k = 2; k <= n; ++k) {
          const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
          p0 = p1;
          p1 = pk;
        }
        dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      r.nodes[i] = x;
      r.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
  }();
  return rule;
}

}  // namespace fracstep::numkit
