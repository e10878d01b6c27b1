#include <cmath>
#include <numbers>
#include <string>

#include "fracstep/errors.hpp"
#include "fracstep/mlf.hpp"
#include "fracstep/reference.hpp"

namespace fracstep::reference {

namespace {

constexpr double kPi = std::numbers::pi;

double smooth(double x, double y) { return x * y * (1.0 - x) * (1.0 - y); }

std::array<double, 2> smooth_grad(double x, double y) {
  return {(1.0 - 2.0 * x) * y * (1.0 - y), (1.0 - 2.0 * y) * x * (1.0 - x)};
}

// Characteristic function of (0, 1/2] x (0, 1).
double half_indicator(double x, double y) { return (x > 0.0 && x <= 0.5 && y > 0.0 && y < 1.0) ? 1.0 : 0.0; }

double zero_fn(double, double) { return 0.0; }

double smooth_hat(int k, int l) {
  if (k % 2 == 0 || l % 2 == 0) return 0.0;
  const double kl = static_cast<double>(k) * l;
  return 32.0 / (kl * kl * kl * std::pow(kPi, 6));
}

// 1 - cos(k pi / 2) for integer k, exactly.
double one_minus_cos_quarter(int k) {
  switch (k % 4) {
    case 0: return 0.0;
    case 2: return 2.0;
    default: return 1.0;
  }
}

double indicator_hat(int k, int l) {
  if (l % 2 == 0) return 0.0;
  return 4.0 * one_minus_cos_quarter(k) / (static_cast<double>(k) * l * kPi * kPi);
}

double zero_hat(int, int) { return 0.0; }

}  // namespace

CaseSpec make_case(char id, double alpha) {
  CaseSpec c;
  c.id = id;
  c.alpha = alpha;
  c.v = c.b = c.f_space = zero_fn;
  c.grad_v = [](double, double) { return std::array<double, 2>{0.0, 0.0}; };
  c.vhat = c.bhat = c.fhat = zero_hat;
  c.f_time = [](double) { return 0.0; };
  c.F_time = [](double) { return 0.0; };

  auto smooth_v = [&] {
    c.v = smooth;
    c.grad_v = smooth_grad;
    c.vhat = smooth_hat;
    c.has_v = true;
    c.v_norm = 1.0 / 30.0;
    c.q_regularity = 2.0;
  };
  auto rough_v = [&] {
    c.v = half_indicator;
    c.grad_v = nullptr;
    c.vhat = indicator_hat;
    c.has_v = true;
    c.v_norm = std::sqrt(0.5);
    c.q_regularity = 0.5;
  };
  auto rough_source = [&] {
    c.f_space = half_indicator;
    c.fhat = indicator_hat;
    c.f_time = [](double t) { return 1.0 + std::pow(t, 0.2); };
    c.F_time = [](double t) { return t + std::pow(t, 1.2) / 1.2; };
    c.has_f = true;
    c.f_space_norm = std::sqrt(0.5);
    c.q_regularity = 0.5;
  };

  switch (id) {
    case 'a': smooth_v(); break;
    case 'b': rough_v(); break;
    case 'c': rough_source(); break;
    case 'd': smooth_v(); break;
    case 'e': rough_v(); break;
    case 'f':
      c.b = half_indicator;
      c.bhat = indicator_hat;
      c.has_b = true;
      c.b_norm = std::sqrt(0.5);
      c.q_regularity = 0.5;
      break;
    case 'g': rough_source(); break;
    default: throw ConfigError(std::string("unknown case '") + id + "' (expected a-g)");
  }
  c.equation = id <= 'c' ? Equation::subdiffusion : Equation::diffusion_wave;
  if (c.equation == Equation::subdiffusion && !(alpha > 0.0 && alpha < 1.0))
    throw ConfigError(std::string("case ") + id + " is a subdiffusion case and needs 0 < alpha < 1");
  if (c.equation == Equation::diffusion_wave && !(alpha > 1.0 && alpha < 2.0))
    throw ConfigError(std::string("case ") + id + " is a diffusion-wave case and needs 1 < alpha < 2");
  return c;
}

double duhamel_mode(double alpha, double lambda, double t) {
  static const double gamma12 = std::tgamma(1.2);
  return mlf::mlf_scaled_t({alpha, alpha + 1.0}, lambda, t) +
         gamma12 * mlf::mlf_scaled_t({alpha, alpha + 1.2}, lambda, t);
}

}  // namespace fracstep::reference
