#include <atomic>
#include <cstdlib>
#include <string_view>

#include "fracstep/kernels.hpp"

namespace fracstep::kernels {

namespace {

Isa detect() noexcept {
  if (const char* env = std::getenv("FRACSTEP_SIMD"); env != nullptr && std::string_view(env) == "scalar")
    return Isa::scalar;
  return avx2_available() ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& active() noexcept {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool avx2_available() noexcept {
#if defined(FRACSTEP_HAVE_AVX2)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa active_isa() noexcept { return active().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) noexcept {
  if (isa == Isa::avx2 && !avx2_available()) isa = Isa::scalar;
  active().store(isa, std::memory_order_relaxed);
}

#if defined(FRACSTEP_HAVE_AVX2)
#define FRACSTEP_DISPATCH(call) \
  return active_isa() == Isa::avx2 ? avx2::call : scalar::call
#else
#define FRACSTEP_DISPATCH(call) return scalar::call
#endif

double dot(std::span<const double> a, std::span<const double> b) noexcept { FRACSTEP_DISPATCH(dot(a, b)); }

void axpy(double a, std::span<const double> x, std::span<double> y) noexcept { FRACSTEP_DISPATCH(axpy(a, x, y)); }

void xpby(std::span<const double> x, double b, std::span<double> y) noexcept { FRACSTEP_DISPATCH(xpby(x, b, y)); }

void spmv(const CsrView& a, std::span<const double> x, std::span<double> y) noexcept {
  FRACSTEP_DISPATCH(spmv(a, x, y));
}

void rotate(std::span<double> x, std::span<double> y, double c, double s) noexcept {
  FRACSTEP_DISPATCH(rotate(x, y, c, s));
}

void weighted_row_sum(std::span<const double> weights, const double* rows, std::size_t stride,
                      std::span<double> out) noexcept {
  FRACSTEP_DISPATCH(weighted_row_sum(weights, rows, stride, out));
}

#undef FRACSTEP_DISPATCH

}  // namespace fracstep::kernels
