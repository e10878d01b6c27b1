#pragma once

// Two-parameter Mittag-Leffler function E_{alpha,beta}(x) on the negative real
// axis, 0 < alpha <= 2, beta > 0.

#include <string_view>

namespace fracstep::mlf {

struct MlfParams {
  double alpha = 1.0;
  double beta = 1.0;
  double target_accuracy = 1e-12;
};

enum class Regime { closed_form, taylor, asymptotic, integral };

std::string_view regime_name(Regime r) noexcept;

/// Evaluation path mlf() takes for this argument.
Regime select_regime(const MlfParams& p, double x);

/// E_{alpha,beta}(x) for x <= 0. Throws ConfigError on bad parameters and
/// NumericalError (carrying the achieved relative bound) when the integral
/// regime cannot meet target_accuracy.
double mlf(const MlfParams& p, double x);

/// t^{beta-1} E_{alpha,beta}(-lambda t^alpha), continuous at t = 0.
double mlf_scaled_t(const MlfParams& p, double lambda, double t);

/// 1/Gamma(x); zero at the poles 0, -1, -2, ...
double rgamma(double x);
long double rgammal(long double x);

}  // namespace fracstep::mlf
