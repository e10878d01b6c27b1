#pragma once

// Globally adaptive Gauss-Legendre panel quadrature on finite intervals.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

namespace fracstep::numkit {

struct GaussLegendreRule {
  static constexpr std::size_t kPoints = 20;
  std::array<double, kPoints> nodes{};    // on [-1, 1]
  std::array<double, kPoints> weights{};
};

/// 20-point rule, nodes computed once by Newton iteration on P_20.
const GaussLegendreRule& gauss_legendre20();

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = true;
};

namespace detail {

struct Panel {
  double a;
  double b;
  double value;      // sum of the two half-panel rules
  double left;
  double right;
  double error;      // |halves - whole|
  double magnitude;  // integral of |f|, sets the round-off floor
};

// (integral, integral of |f|) by one 20-point rule.
template <class F>
std::pair<double, double> gl_apply(const F& f, double a, double b) {
  const auto& rule = gauss_legendre20();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0, mag = 0.0;
  for (std::size_t i = 0; i < GaussLegendreRule::kPoints; ++i) {
    const double v = rule.weights[i] * f(mid + half * rule.nodes[i]);
    sum += v;
    mag += std::abs(v);
  }
  return {sum * half, mag * std::abs(half)};
}

template <class F>
Panel make_panel(const F& f, double a, double b, double whole) {
  const double mid = 0.5 * (a + b);
  const auto [lv, lm] = gl_apply(f, a, mid);
  const auto [rv, rm] = gl_apply(f, mid, b);
  return {a, b, lv + rv, lv, rv, std::abs(lv + rv - whole), lm + rm};
}

inline bool at_noise_floor(const Panel& p) { return p.error <= 1e-14 * p.magnitude; }

}  // namespace detail

/// Bisects the panel with the largest whole-vs-halves discrepancy until the
/// summed discrepancy is below abs_tol, the worst panel sits at its round-off
/// floor, or max_panels is reached (then converged = false).
template <class F>
QuadratureResult integrate(const F& f, double a, double b, double abs_tol, std::size_t max_panels = 2000) {
  QuadratureResult out;
  if (a == b) return out;
  auto less = [](const detail::Panel& x, const detail::Panel& y) { return x.error < y.error; };
  std::vector<detail::Panel> heap;
  heap.push_back(detail::make_panel(f, a, b, detail::gl_apply(f, a, b).first));
  double total_error = heap.front().error;
  bool exhausted = false;
  while (total_error > abs_tol) {
    const detail::Panel worst = heap.front();
    if (detail::at_noise_floor(worst)) break;
    const double mid = 0.5 * (worst.a + worst.b);
    if (heap.size() >= max_panels || !(mid > worst.a && mid < worst.b)) {
      exhausted = true;
      break;
    }
    std::pop_heap(heap.begin(), heap.end(), less);
    heap.pop_back();
    for (const auto& child :
         {detail::make_panel(f, worst.a, mid, worst.left), detail::make_panel(f, mid, worst.b, worst.right)}) {
      heap.push_back(child);
      std::push_heap(heap.begin(), heap.end(), less);
    }
    // Total recomputed from the heap each pass.
    total_error = 0.0;
    for (const auto& p : heap) total_error += p.error;
  }
  for (const auto& p : heap) {
    out.value += p.value;
    out.error_estimate += p.error;
  }
  out.converged = !exhausted;
  return out;
}

}  // namespace fracstep::numkit
