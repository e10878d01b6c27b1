#pragma once

// Convolution quadrature weights: Taylor coefficients of (delta(xi)/tau)^alpha
// for the backward Euler and second-order backward difference generators.

#include <cstddef>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

namespace fracstep::cq {

enum class RuleKind { BE, SBD };

std::string_view rule_name(RuleKind kind) noexcept;
/// Accepts "be" / "sbd" in any case; throws ConfigError otherwise.
RuleKind parse_rule(std::string_view name);

struct CqRule {
  RuleKind kind = RuleKind::BE;
  std::vector<double> delta_coeffs;  // delta(xi) = sum_j delta_coeffs[j] xi^j

  static CqRule of(RuleKind kind);
  static CqRule backward_euler() { return of(RuleKind::BE); }
  static CqRule sbd() { return of(RuleKind::SBD); }
};

struct CqWeights {
  CqRule rule;
  double alpha = 0.0;
  double tau = 1.0;
  std::vector<double> weights;  // omega_0 .. omega_N, tau^{-alpha} included

  std::size_t N() const noexcept { return weights.empty() ? 0 : weights.size() - 1; }
  double operator[](std::size_t j) const noexcept { return weights[j]; }
};

/// Power-series power recurrence on delta(xi), then scaled by tau^{-alpha}.
CqWeights cq_weights(const CqRule& rule, double alpha, double tau, std::size_t N);

/// Same weights by sampling (delta(xi)/tau)^alpha on a circle of radius rho < 1
/// and inverting with an FFT. Slow path, kept as an independent check.
CqWeights cq_weights_fft(const CqRule& rule, double alpha, double tau, std::size_t N);

/// sum_{j=0}^{n} omega_j g_{n-j}.
double cq_apply(const CqWeights& w, std::span<const double> g, std::size_t n);

/// Vector-valued version: history holds g_0..g_n as consecutive rows of length
/// `dim`; out += sum_{j=j_begin}^{n} omega_j g_{n-j}.
void cq_apply_rows(const CqWeights& w, const double* history, std::size_t dim, std::size_t n, std::span<double> out,
                   std::size_t j_begin = 0);

/// Weights shared across a run, keyed on (rule, alpha, tau, N).
std::shared_ptr<const CqWeights> cached_weights(RuleKind kind, double alpha, double tau, std::size_t N);

}  // namespace fracstep::cq
