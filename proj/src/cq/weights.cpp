#include <fftw3.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <tuple>

#include "fracstep/cq.hpp"
#include "fracstep/errors.hpp"
#include "fracstep/kernels.hpp"

namespace fracstep::cq {

std::string_view rule_name(RuleKind kind) noexcept { return kind == RuleKind::BE ? "BE" : "SBD"; }

RuleKind parse_rule(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "be") return RuleKind::BE;
  if (lower == "sbd") return RuleKind::SBD;
  throw ConfigError("unknown convolution quadrature rule '" + std::string(name) + "'");
}

CqRule CqRule::of(RuleKind kind) {
  CqRule r;
  r.kind = kind;
  if (kind == RuleKind::BE)
    r.delta_coeffs = {1.0, -1.0};
  else
    r.delta_coeffs = {1.5, -2.0, 0.5};
  return r;
}

namespace {

// Serializes FFTW planner calls.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void check_args(double alpha, double tau) {
  if (!std::isfinite(alpha)) throw ConfigError("cq weights: order must be finite");
  if (!(tau > 0.0) || !std::isfinite(tau)) throw ConfigError("cq weights: time step must be positive");
}

}  // namespace

CqWeights cq_weights(const CqRule& rule, double alpha, double tau, std::size_t N) {
  check_args(alpha, tau);
  const auto& a = rule.delta_coeffs;
  if (a.empty() || !(a[0] > 0.0)) throw ConfigError("invalid generating polynomial");
  const std::size_t deg = a.size() - 1;

  std::vector<double> q(N + 1, 0.0);
  q[0] = std::pow(a[0], alpha);
  for (std::size_t n = 1; n <= N; ++n) {
    double s = 0.0;
    for (std::size_t j = 1; j <= std::min(n, deg); ++j)
      s += ((alpha + 1.0) * static_cast<double>(j) - static_cast<double>(n)) * a[j] * q[n - j];
    q[n] = s / (static_cast<double>(n) * a[0]);
  }
  const double scale = std::pow(tau, -alpha);
  for (double& v : q) v *= scale;
  return {rule, alpha, tau, std::move(q)};
}

CqWeights cq_weights_fft(const CqRule& rule, double alpha, double tau, std::size_t N) {
  check_args(alpha, tau);
  const auto& a = rule.delta_coeffs;
  if (a.empty() || !(a[0] > 0.0)) throw ConfigError("invalid generating polynomial");

  // rho^{-N} = 10, rho^L = 1e-16.
  const std::size_t L = 16 * std::max<std::size_t>(N, 4);
  const double rho = std::pow(10.0, -1.0 / static_cast<double>(std::max<std::size_t>(N, 4)));

  fftw_complex* buf = fftw_alloc_complex(L);
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(L), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  for (std::size_t k = 0; k < L; ++k) {
    const std::complex<double> xi = std::polar(rho, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(L));
    // Principal-branch factors. BE: 1 - xi; SBD: (1 - xi)(3 - xi)/2.
    std::complex<double> value = std::pow(1.0 - xi, alpha);
    if (rule.kind == RuleKind::SBD) value *= std::pow(0.5 * (3.0 - xi), alpha);
    buf[k][0] = value.real();
    buf[k][1] = value.imag();
  }
  fftw_execute(plan);

  std::vector<double> w(N + 1);
  const double scale = std::pow(tau, -alpha) / static_cast<double>(L);
  double rho_inv = 1.0;
  for (std::size_t j = 0; j <= N; ++j) {
    w[j] = buf[j][0] * scale * rho_inv;
    rho_inv /= rho;
  }
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(buf);
  return {rule, alpha, tau, std::move(w)};
}

double cq_apply(const CqWeights& w, std::span<const double> g, std::size_t n) {
  if (n > w.N()) throw ConfigError("cq_apply: index " + std::to_string(n) + " exceeds the weight table");
  if (n >= g.size()) throw ConfigError("cq_apply: sequence too short");
  double s = 0.0;
  for (std::size_t j = 0; j <= n; ++j) s += w.weights[j] * g[n - j];
  return s;
}

void cq_apply_rows(const CqWeights& w, const double* history, std::size_t dim, std::size_t n, std::span<double> out,
                   std::size_t j_begin) {
  if (n > w.N()) throw ConfigError("cq_apply: index " + std::to_string(n) + " exceeds the weight table");
  if (j_begin > n) return;
  // Rows g_0 .. g_{n-j_begin} paired with omega_n .. omega_{j_begin}.
  const std::size_t count = n - j_begin + 1;
  std::vector<double> reversed(count);
  for (std::size_t m = 0; m < count; ++m) reversed[m] = w.weights[n - m];
  kernels::weighted_row_sum(reversed, history, dim, out.first(dim));
}

std::shared_ptr<const CqWeights> cached_weights(RuleKind kind, double alpha, double tau, std::size_t N) {
  using Key = std::tuple<int, double, double, std::size_t>;
  static std::mutex mutex;
  static std::map<Key, std::shared_ptr<const CqWeights>> cache;
  const Key key{static_cast<int>(kind), alpha, tau, N};
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto w = std::make_shared<const CqWeights>(cq_weights(CqRule::of(kind), alpha, tau, N));
  std::lock_guard lock(mutex);
  return cache.emplace(key, std::move(w)).first->second;
}

}  // namespace fracstep::cq
