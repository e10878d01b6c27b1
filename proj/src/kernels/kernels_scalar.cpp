#include "fracstep/kernels.hpp"

namespace fracstep::kernels::scalar {

double dot(std::span<const double> a, std::span<const double> b) noexcept {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

void axpy(double a, std::span<const double> x, std::span<double> y) noexcept {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

void xpby(std::span<const double> x, double b, std::span<double> y) noexcept {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + b * y[i];
}

void spmv(const CsrView& a, std::span<const double> x, std::span<double> y) noexcept {
  for (std::size_t r = 0; r < a.n_rows; ++r) {
    double sum = 0.0;
    for (Index k = a.row_offsets[r]; k < a.row_offsets[r + 1]; ++k)
      sum += a.values[k] * x[static_cast<std::size_t>(a.col_indices[k])];
    y[r] = sum;
  }
}

void rotate(std::span<double> x, std::span<double> y, double c, double s) noexcept {
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    const double yi = y[i];
    x[i] = c * xi - s * yi;
    y[i] = s * xi + c * yi;
  }
}

void weighted_row_sum(std::span<const double> weights, const double* rows, std::size_t stride,
                      std::span<double> out) noexcept {
  for (std::size_t k = 0; k < weights.size(); ++k) {
    const double w = weights[k];
    if (w == 0.0) continue;
    const double* row = rows + k * stride;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += w * row[i];
  }
}

}  // namespace fracstep::kernels::scalar
