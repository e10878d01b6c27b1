// Compiled with -mavx2 -mfma; only reached through the runtime dispatcher.

#include <immintrin.h>

#include <algorithm>

#include "fracstep/kernels.hpp"

namespace fracstep::kernels::avx2 {

namespace {

inline double hsum(__m256d v) noexcept {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// Column block for weighted_row_sum, in doubles.
constexpr std::size_t kRowBlock = 512;

}  // namespace

double dot(std::span<const double> a, std::span<const double> b) noexcept {
  const std::size_t n = a.size();
  const double* pa = a.data();
  const double* pb = b.data();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(pa + i), _mm256_loadu_pd(pb + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(pa + i + 4), _mm256_loadu_pd(pb + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(pa + i), _mm256_loadu_pd(pb + i), acc0);
  double sum = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) sum += pa[i] * pb[i];
  return sum;
}

void axpy(double a, std::span<const double> x, std::span<double> y) noexcept {
  const std::size_t n = x.size();
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vy = _mm256_loadu_pd(y.data() + i);
    _mm256_storeu_pd(y.data() + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x.data() + i), vy));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void xpby(std::span<const double> x, double b, std::span<double> y) noexcept {
  const std::size_t n = x.size();
  const __m256d vb = _mm256_set1_pd(b);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vy = _mm256_loadu_pd(y.data() + i);
    _mm256_storeu_pd(y.data() + i, _mm256_fmadd_pd(vb, vy, _mm256_loadu_pd(x.data() + i)));
  }
  for (; i < n; ++i) y[i] = x[i] + b * y[i];
}

void spmv(const CsrView& a, std::span<const double> x, std::span<double> y) noexcept {
  const double* px = x.data();
  for (std::size_t r = 0; r < a.n_rows; ++r) {
    Index k = a.row_offsets[r];
    const Index end = a.row_offsets[r + 1];
    __m256d acc = _mm256_setzero_pd();
    for (; k + 4 <= end; k += 4) {
      const __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(a.col_indices + k));
      const __m256d vx = _mm256_i32gather_pd(px, idx, 8);
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(a.values + k), vx, acc);
    }
    double sum = hsum(acc);
    for (; k < end; ++k) sum += a.values[k] * px[a.col_indices[k]];
    y[r] = sum;
  }
}

void rotate(std::span<double> x, std::span<double> y, double c, double s) noexcept {
  const std::size_t n = x.size();
  const __m256d vc = _mm256_set1_pd(c);
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vx = _mm256_loadu_pd(x.data() + i);
    const __m256d vy = _mm256_loadu_pd(y.data() + i);
    _mm256_storeu_pd(x.data() + i, _mm256_fmsub_pd(vc, vx, _mm256_mul_pd(vs, vy)));
    _mm256_storeu_pd(y.data() + i, _mm256_fmadd_pd(vs, vx, _mm256_mul_pd(vc, vy)));
  }
  for (; i < n; ++i) {
    const double xi = x[i];
    const double yi = y[i];
    x[i] = c * xi - s * yi;
    y[i] = s * xi + c * yi;
  }
}

void weighted_row_sum(std::span<const double> weights, const double* rows, std::size_t stride,
                      std::span<double> out) noexcept {
  const std::size_t n = out.size();
  for (std::size_t start = 0; start < n; start += kRowBlock) {
    const std::size_t len = std::min(kRowBlock, n - start);
    double* o = out.data() + start;
    for (std::size_t k = 0; k < weights.size(); ++k) {
      const double w = weights[k];
      if (w == 0.0) continue;
      const __m256d vw = _mm256_set1_pd(w);
      const double* row = rows + k * stride + start;
      std::size_t i = 0;
      for (; i + 8 <= len; i += 8) {
        _mm256_storeu_pd(o + i, _mm256_fmadd_pd(vw, _mm256_loadu_pd(row + i), _mm256_loadu_pd(o + i)));
        _mm256_storeu_pd(o + i + 4,
                         _mm256_fmadd_pd(vw, _mm256_loadu_pd(row + i + 4), _mm256_loadu_pd(o + i + 4)));
      }
      for (; i < len; ++i) o[i] += w * row[i];
    }
  }
}

}  // namespace fracstep::kernels::avx2
