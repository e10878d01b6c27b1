#pragma once

// Data-parallel inner loops shared by the solvers. Every kernel has a scalar
// reference implementation and (when built with FRACSTEP_ENABLE_AVX2) an
// AVX2/FMA variant; the public entry points dispatch on the ISA detected at
// first use. FRACSTEP_SIMD=scalar in the environment forces the reference path.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace fracstep::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa) noexcept;

/// True when the AVX2 variants were compiled in and the CPU supports AVX2+FMA.
bool avx2_available() noexcept;

/// ISA used by the dispatched entry points.
Isa active_isa() noexcept;

/// Overrides the dispatch choice (tests use this to compare variants).
/// Requesting avx2 on a machine without it falls back to scalar.
void set_active_isa(Isa isa) noexcept;

using Index = std::int32_t;

struct CsrView {
  std::size_t n_rows = 0;
  const Index* row_offsets = nullptr;
  const Index* col_indices = nullptr;
  const double* values = nullptr;
};

double dot(std::span<const double> a, std::span<const double> b) noexcept;
/// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y) noexcept;
/// y = x + b * y  (the CG direction update)
void xpby(std::span<const double> x, double b, std::span<double> y) noexcept;
/// y = A x
void spmv(const CsrView& a, std::span<const double> x, std::span<double> y) noexcept;
/// Plane rotation: x <- c x - s y, y <- s x + c y.
void rotate(std::span<double> x, std::span<double> y, double c, double s) noexcept;
/// out[i] += sum_k weights[k] * rows[k * stride + i] for i < out.size().
void weighted_row_sum(std::span<const double> weights, const double* rows, std::size_t stride,
                      std::span<double> out) noexcept;

namespace scalar {
double dot(std::span<const double> a, std::span<const double> b) noexcept;
void axpy(double a, std::span<const double> x, std::span<double> y) noexcept;
void xpby(std::span<const double> x, double b, std::span<double> y) noexcept;
void spmv(const CsrView& a, std::span<const double> x, std::span<double> y) noexcept;
void rotate(std::span<double> x, std::span<double> y, double c, double s) noexcept;
void weighted_row_sum(std::span<const double> weights, const double* rows, std::size_t stride,
                      std::span<double> out) noexcept;
}  // namespace scalar

#if defined(FRACSTEP_HAVE_AVX2)
namespace avx2 {
double dot(std::span<const double> a, std::span<const double> b) noexcept;
void axpy(double a, std::span<const double> x, std::span<double> y) noexcept;
void xpby(std::span<const double> x, double b, std::span<double> y) noexcept;
void spmv(const CsrView& a, std::span<const double> x, std::span<double> y) noexcept;
void rotate(std::span<double> x, std::span<double> y, double c, double s) noexcept;
void weighted_row_sum(std::span<const double> weights, const double* rows, std::size_t stride,
                      std::span<double> out) noexcept;
}  // namespace avx2
#endif

}  // namespace fracstep::kernels
