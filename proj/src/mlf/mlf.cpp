#include "fracstep/mlf.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "fracstep/errors.hpp"
#include "fracstep/quadrature.hpp"

namespace fracstep::mlf {

namespace {

constexpr long double kPiL = 3.141592653589793238462643383279502884L;

// sin(pi x) with exact argument reduction x - 2 round(x/2).
long double sinpil(long double x) {
  long double r = x - 2.0L * std::nearbyint(x / 2.0L);  // r in [-1, 1]
  if (r > 0.5L) r = 1.0L - r;
  else if (r < -0.5L) r = -1.0L - r;
  return std::sin(kPiL * r);
}

bool is_nonpositive_integer(long double x) { return x <= 0.0L && x == std::nearbyint(x); }

// Taylor regime bound on y^{1/alpha}.
constexpr double kTaylorRadius = 8.0;

// Ray integrals run to r with e^{r cos theta} below 1e-30.
constexpr double kRayDecay = 69.0;

std::vector<long double>& taylor_table(double alpha, double beta) {
  thread_local std::map<std::pair<double, double>, std::vector<long double>> tables;
  return tables[{alpha, beta}];
}

long double taylor_rgamma(double alpha, double beta, std::size_t k) {
  auto& table = taylor_table(alpha, beta);
  while (table.size() <= k)
    table.push_back(rgammal(static_cast<long double>(alpha) * static_cast<long double>(table.size()) + beta));
  return table[k];
}

double taylor(double alpha, double beta, double y) {
  const long double yl = y;
  long double sum = 0.0L, comp = 0.0L;
  long double power = 1.0L;  // (-y)^k
  long double prev = std::numeric_limits<long double>::infinity();
  for (std::size_t k = 0; k < 20000; ++k) {
    const long double term = power * taylor_rgamma(alpha, beta, k);
    // Kahan summation
    const long double yk = term - comp;
    const long double t = sum + yk;
    comp = (t - sum) - yk;
    sum = t;
    const long double mag = std::fabs(term);
    if (k > 2 && mag <= prev && mag <= 1e-21L * std::fabs(sum)) break;
    if (k > 2 && mag == 0.0L && power == 0.0L) break;
    prev = mag;
    power *= -yl;
  }
  return static_cast<double>(sum);
}

// Exponentially small contribution of the pole pair s = y^{1/alpha} e^{+-i pi/alpha}
// of s^{alpha-beta} e^s / (s^alpha + y), present for alpha > 1.
double pole_pair(double alpha, double beta, double y) {
  const std::complex<double> s = std::polar(std::pow(y, 1.0 / alpha), std::numbers::pi / alpha);
  return (2.0 / alpha) * std::real(std::exp(s) * std::pow(s, 1.0 - beta));
}

struct Asymptotic {
  double value;
  double error;  // envelope of the smallest term reached
};

// -sum_{k>=1} (-y)^{-k} / Gamma(beta - alpha k), truncated where the envelope
// y^{-k} Gamma(1 - beta + alpha k) / pi (|1/Gamma| without its sine factor)
// stops decreasing.
Asymptotic asymptotic(double alpha, double beta, double y) {
  const double log_y = std::log(y);
  double sum = 0.0;
  double previous = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 2000; ++k) {
    const double arg = beta - alpha * k;
    const double envelope = arg > 0.5 ? std::fabs(rgamma(arg)) * std::exp(-k * log_y)
                                      : std::exp(std::lgamma(1.0 - arg) - k * log_y) / std::numbers::pi;
    if (envelope > previous) return {sum, previous};
    if (envelope <= 1e-17 * std::fabs(sum)) return {sum, envelope};
    const double sign = (k % 2 == 0) ? -1.0 : 1.0;  // -(-1)^k
    sum += sign * std::exp(-k * log_y) * rgamma(arg);
    previous = envelope;
  }
  return {sum, previous};
}

bool asymptotic_acceptable(const Asymptotic& a, double poles) {
  const double total = a.value + poles;
  return a.error <= 1e-15 * std::fabs(total);
}

// Contour through s = r e^{+-i theta} (r >= 1) joined by the unit arc, plus the
// residues of poles left outside it.
double hankel(double alpha, double beta, double y, double target) {
  using cd = std::complex<double>;
  const double theta =
      alpha <= 1.2 ? 0.75 * std::numbers::pi : 0.5 * (std::numbers::pi / alpha + std::numbers::pi);
  const cd dir = std::polar(1.0, theta);
  // g(s) = e^s s^{alpha-beta} / (s^alpha + y) through one logarithm.
  auto g = [&](double log_r, double phi) {
    const cd ls(log_r, phi);
    return std::exp(cd(std::exp(log_r) * std::cos(phi), std::exp(log_r) * std::sin(phi)) + (alpha - beta) * ls) /
           (std::exp(alpha * ls) + y);
  };
  auto ray = [&](double r) { return std::imag(g(std::log(r), theta) * dir) / std::numbers::pi; };
  auto arc = [&](double phi) { return std::real(g(0.0, phi) * std::polar(1.0, phi)) / std::numbers::pi; };

  const double r_max = 1.0 + kRayDecay / std::fabs(std::cos(theta)) + std::fabs(alpha - beta) * 4.0;
  const double r_peak = std::pow(y, 1.0 / alpha);
  const double residues = theta > std::numbers::pi / alpha ? pole_pair(alpha, beta, y) : 0.0;

  auto evaluate = [&](double tol, numkit::QuadratureResult& total) {
    total = {};
    auto add = [&](const numkit::QuadratureResult& q) {
      total.value += q.value;
      total.error_estimate += q.error_estimate;
      total.converged = total.converged && q.converged;
    };
    add(numkit::integrate(arc, 0.0, theta, tol / 3.0));
    if (r_peak > 1.0 && r_peak < r_max) {
      add(numkit::integrate(ray, 1.0, r_peak, tol / 3.0));
      add(numkit::integrate(ray, r_peak, r_max, tol / 3.0));
    } else {
      add(numkit::integrate(ray, 1.0, r_max, tol / 3.0));
    }
    total.value += residues;
  };

  // Panels refine to their round-off floor.
  numkit::QuadratureResult q;
  evaluate(0.0, q);
  const double rel = q.error_estimate / std::max(std::fabs(q.value), 1e-300);
  if (!q.converged && rel > target)
    throw NumericalError("mlf: contour quadrature stalled at relative bound " + std::to_string(rel), rel);
  return q.value;
}

// alpha = 1: E_{1,beta}(-y) = Gamma(beta-1)^{-1} int_0^1 e^{-yu} (1-u)^{beta-2} du for beta > 1.
double alpha_one(double beta, double y) {
  if (beta == 1.0) return std::exp(-y);
  if (beta == 2.0) return y == 0.0 ? 1.0 : -std::expm1(-y) / y;
  if (beta < 1.0) return static_cast<double>(rgammal(beta)) - y * alpha_one(beta + 1.0, y);
  numkit::QuadratureResult q;
  double value = 0.0;
  if (beta < 2.0) {
    // w = (1-u)^{beta-1} removes the endpoint singularity.
    const double p = 1.0 / (beta - 1.0);
    auto f = [&](double w) { return std::exp(-y * (1.0 - std::pow(w, p))); };
    q = numkit::integrate(f, 0.0, 1.0, 1e-18);
    value = q.value * p * rgamma(beta - 1.0);
  } else {
    auto f = [&](double u) { return std::exp(-y * u) * std::pow(1.0 - u, beta - 2.0); };
    const double split = y > 1.0 ? std::min(0.5, 40.0 / y) : 0.5;
    q = numkit::integrate(f, 0.0, split, 1e-18);
    const auto tail = numkit::integrate(f, split, 1.0, 1e-18);
    q.value += tail.value;
    q.converged = q.converged && tail.converged;
    value = q.value * rgamma(beta - 1.0);
  }
  return value;
}

void check(const MlfParams& p) {
  if (!(p.alpha > 0.0 && p.alpha <= 2.0)) throw ConfigError("mlf: alpha must lie in (0, 2]");
  if (!(p.beta > 0.0) || !std::isfinite(p.beta)) throw ConfigError("mlf: beta must be positive");
  if (!(p.target_accuracy > 0.0)) throw ConfigError("mlf: target accuracy must be positive");
}

}  // namespace

std::string_view regime_name(Regime r) noexcept {
  switch (r) {
    case Regime::closed_form: return "closed_form";
    case Regime::taylor: return "taylor";
    case Regime::asymptotic: return "asymptotic";
    case Regime::integral: return "integral";
  }
  return "unknown";
}

long double rgammal(long double x) {
  if (is_nonpositive_integer(x)) return 0.0L;
  if (x < 0.5L) {
    // 1/Gamma(x) = Gamma(1-x) sin(pi x) / pi
    return std::tgamma(1.0L - x) * sinpil(x) / kPiL;
  }
  if (x > 1750.0L) return 0.0L;
  return 1.0L / std::tgamma(x);
}

double rgamma(double x) { return static_cast<double>(rgammal(x)); }

namespace {

// Evaluates and reports the regime used.
double evaluate(const MlfParams& p, double x, Regime& regime, bool value_needed) {
  check(p);
  if (x > 0.0 || std::isnan(x)) throw ConfigError("mlf: argument must be non-positive");
  const double y = -x;
  if (p.alpha == 1.0) {
    regime = Regime::closed_form;
    return value_needed ? alpha_one(p.beta, y) : 0.0;
  }
  if (y == 0.0 || std::pow(y, 1.0 / p.alpha) <= kTaylorRadius) {
    regime = Regime::taylor;
    return value_needed ? taylor(p.alpha, p.beta, y) : 0.0;
  }
  const double poles = p.alpha > 1.0 ? pole_pair(p.alpha, p.beta, y) : 0.0;
  const Asymptotic a = asymptotic(p.alpha, p.beta, y);
  if (asymptotic_acceptable(a, poles)) {
    regime = Regime::asymptotic;
    return a.value + poles;
  }
  regime = Regime::integral;
  return value_needed ? hankel(p.alpha, p.beta, y, p.target_accuracy) : 0.0;
}

}  // namespace

Regime select_regime(const MlfParams& p, double x) {
  Regime r{};
  evaluate(p, x, r, false);
  return r;
}

double mlf(const MlfParams& p, double x) {
  Regime r{};
  return evaluate(p, x, r, true);
}

double mlf_scaled_t(const MlfParams& p, double lambda, double t) {
  if (!(lambda >= 0.0)) throw ConfigError("mlf_scaled_t: lambda must be non-negative");
  if (!(t >= 0.0)) throw ConfigError("mlf_scaled_t: t must be non-negative");
  if (t == 0.0) {
    check(p);
    if (p.beta > 1.0) return 0.0;
    if (p.beta == 1.0) return 1.0;
    throw ConfigError("mlf_scaled_t: t^{beta-1} is singular at t = 0 for beta < 1");
  }
  const double power = p.beta == 1.0 ? 1.0 : std::pow(t, p.beta - 1.0);
  return power * mlf(p, -lambda * std::pow(t, p.alpha));
}

}  // namespace fracstep::mlf
