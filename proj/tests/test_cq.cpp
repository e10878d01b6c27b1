#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "fracstep/cq.hpp"
#include "fracstep/errors.hpp"
#include "oracles.hpp"

using namespace fracstep;
using namespace fracstep::cq;

namespace {

const double kAlphas[] = {0.1, 0.5, 0.9, 1.1, 1.5, 1.9};

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST(CqRule, GeneratorCoefficients) {
  const auto be = CqRule::backward_euler();
  const auto sbd = CqRule::sbd();
  EXPECT_EQ(be.delta_coeffs, (std::vector<double>{1.0, -1.0}));
  EXPECT_EQ(sbd.delta_coeffs, (std::vector<double>{1.5, -2.0, 0.5}));
  for (const auto& r : {be, sbd}) {
    double at1 = 0.0, slope = 0.0;
    for (std::size_t j = 0; j < r.delta_coeffs.size(); ++j) {
      at1 += r.delta_coeffs[j];
      slope += static_cast<double>(j) * r.delta_coeffs[j];
    }
    EXPECT_EQ(at1, 0.0);
    EXPECT_NE(slope, 0.0);
  }
  EXPECT_EQ(parse_rule("SBD"), RuleKind::SBD);
  EXPECT_EQ(parse_rule("be"), RuleKind::BE);
  EXPECT_THROW(parse_rule("bdf3"), ConfigError);
}

TEST(CqWeights, FirstOrderDifference) {
  const auto w = cq_weights(CqRule::backward_euler(), 1.0, 0.1, 3);
  ASSERT_EQ(w.N(), 3u);
  EXPECT_NEAR(w[0], 10.0, 1e-13);
  EXPECT_NEAR(w[1], -10.0, 1e-13);
  EXPECT_EQ(w[2], 0.0);
  EXPECT_EQ(w[3], 0.0);
}

TEST(CqWeights, HalfOrderBinomials) {
  const auto w = cq_weights(CqRule::backward_euler(), 0.5, 1.0, 3);
  EXPECT_NEAR(w[0], 1.0, 1e-15);
  EXPECT_NEAR(w[1], -0.5, 1e-15);
  EXPECT_NEAR(w[2], -0.125, 1e-15);
  EXPECT_NEAR(w[3], -0.0625, 1e-15);
}

TEST(CqWeights, SbdLeadingWeight) {
  EXPECT_NEAR(cq_weights(CqRule::sbd(), 0.5, 1.0, 0)[0], 1.2247448714, 1e-10);
}

TEST(CqWeights, ZeroOrderIsIdentity) {
  for (const auto& r : {CqRule::backward_euler(), CqRule::sbd()}) {
    const auto w = cq_weights(r, 0.0, 0.3, 8);
    EXPECT_EQ(w[0], 1.0);
    for (std::size_t j = 1; j <= 8; ++j) EXPECT_EQ(w[j], 0.0);
    const auto f = cq_weights_fft(r, 0.0, 0.3, 8);
    EXPECT_NEAR(f[0], 1.0, 1e-14);
    for (std::size_t j = 1; j <= 8; ++j) EXPECT_NEAR(f[j], 0.0, 1e-14);
  }
}

TEST(CqWeights, MatchesIndependentSeries) {
  for (double a : kAlphas) {
    const auto be = cq_weights(CqRule::backward_euler(), a, 1.0, 200);
    const auto sbd = cq_weights(CqRule::sbd(), a, 1.0, 200);
    const auto be_ref = oracle::be_weights(a, 200);
    const auto sbd_ref = oracle::sbd_weights(a, 200);
    for (std::size_t j = 0; j <= 200; ++j) {
      EXPECT_NEAR(be[j], be_ref[j], 1e-14 * std::max(1.0, std::abs(be_ref[j]))) << a << " " << j;
      EXPECT_NEAR(sbd[j], sbd_ref[j], 1e-13) << a << " " << j;
    }
  }
}

TEST(CqWeights, RecurrenceAgreesWithTransform) {
  for (const auto& r : {CqRule::backward_euler(), CqRule::sbd()})
    for (double a : kAlphas) {
      const auto rec = cq_weights(r, a, 1.0, 512);
      const auto fft = cq_weights_fft(r, a, 1.0, 512);
      std::vector<double> diff(513);
      for (std::size_t j = 0; j <= 512; ++j) diff[j] = rec[j] - fft[j];
      EXPECT_LE(max_abs(diff), 1e-12 * max_abs(rec.weights)) << rule_name(r.kind) << " alpha=" << a;
    }
}

TEST(CqWeights, TransformExamples) {
  {
    const auto rec = cq_weights(CqRule::backward_euler(), 0.5, 1.0, 64);
    const auto fft = cq_weights_fft(CqRule::backward_euler(), 0.5, 1.0, 64);
    for (std::size_t j = 0; j <= 64; ++j) EXPECT_NEAR(rec[j], fft[j], 1e-12);
  }
  {
    const auto rec = cq_weights(CqRule::sbd(), 1.5, 0.01, 128);
    const auto fft = cq_weights_fft(CqRule::sbd(), 1.5, 0.01, 128);
    for (std::size_t j = 0; j <= 128; ++j) EXPECT_NEAR(rec[j], fft[j], 1e-11 * max_abs(rec.weights));
  }
}

TEST(CqWeights, ScalingLawIsExact) {
  for (const auto& r : {CqRule::backward_euler(), CqRule::sbd()})
    for (double a : kAlphas)
      for (double tau : {0.1, 0.003, 2.5}) {
        const auto w1 = cq_weights(r, a, 1.0, 40);
        const auto wt = cq_weights(r, a, tau, 40);
        for (std::size_t j = 0; j <= 40; ++j) EXPECT_EQ(wt[j], w1[j] * std::pow(tau, -a));
      }
}

TEST(CqWeights, CompositionAddsOrders) {
  const std::size_t N = 300;
  for (const auto& r : {CqRule::backward_euler(), CqRule::sbd()})
    for (double a : {0.3, 0.5, 0.9})
      for (double b : {0.2, 0.7, 1.1}) {
        const auto wa = cq_weights(r, a, 1.0, N);
        const auto wb = cq_weights(r, b, 1.0, N);
        const auto wab = cq_weights(r, a + b, 1.0, N);
        std::vector<double> diff(N + 1);
        for (std::size_t n = 0; n <= N; ++n) {
          double s = 0.0;
          for (std::size_t j = 0; j <= n; ++j) s += wa[j] * wb[n - j];
          diff[n] = s - wab[n];
        }
        EXPECT_LE(max_abs(diff), 1e-12 * max_abs(wab.weights)) << a << "+" << b;
      }
}

TEST(CqWeights, BackwardEulerSignsAndPartialSums) {
  for (double a : {0.1, 0.5, 0.9}) {
    const auto w = cq_weights(CqRule::backward_euler(), a, 1.0, 2000);
    EXPECT_GT(w[0], 0.0);
    double partial = w[0], prev = partial;
    for (std::size_t j = 1; j <= 2000; ++j) {
      EXPECT_LT(w[j], 0.0);
      partial += w[j];
      EXPECT_LT(partial, prev);
      EXPECT_GT(partial, 0.0);
      prev = partial;
    }
    // Partial sum n equals n^{-alpha}/Gamma(1-alpha) to leading order.
    EXPECT_NEAR(partial * std::tgamma(1.0 - a) * std::pow(2000.0, a), 1.0, 0.01);
  }
}

TEST(CqWeights, InvalidInputs) {
  CqRule bad{RuleKind::BE, {-1.0, 1.0}};
  try {
    cq_weights(bad, 0.5, 1.0, 4);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_STREQ(e.what(), "invalid generating polynomial");
  }
  EXPECT_THROW(cq_weights_fft(bad, 0.5, 1.0, 4), ConfigError);
  EXPECT_THROW(cq_weights(CqRule::sbd(), 0.5, 0.0, 4), ConfigError);
  EXPECT_THROW(cq_weights(CqRule::sbd(), 0.5, -1.0, 4), ConfigError);
}

TEST(CqApply, BackwardDifference) {
  const double tau = 0.25;
  const auto w = cq_weights(CqRule::backward_euler(), 1.0, tau, 6);
  const std::vector<double> g{0.3, 1.1, -0.4, 2.0, 0.0, 5.5, 1.0};
  for (std::size_t n = 1; n <= 6; ++n) EXPECT_NEAR(cq_apply(w, g, n), (g[n] - g[n - 1]) / tau, 1e-13);
}

TEST(CqApply, SbdOfRampIsShiftedOne) {
  const double tau = 0.1;
  const auto w = cq_weights(CqRule::sbd(), 1.0, tau, 10);
  std::vector<double> g(11);
  for (std::size_t m = 0; m <= 10; ++m) g[m] = tau * static_cast<double>(m);
  EXPECT_NEAR(cq_apply(w, g, 0), 0.0, 1e-15);
  EXPECT_NEAR(cq_apply(w, g, 1), 1.5, 1e-13);
  for (std::size_t n = 2; n <= 10; ++n) EXPECT_NEAR(cq_apply(w, g, n), 1.0, 1e-13);
}

TEST(CqApply, HalfOrderOnConstant) {
  const auto w = cq_weights(CqRule::backward_euler(), 0.5, 1.0, 2);
  EXPECT_NEAR(cq_apply(w, std::vector<double>{1, 1, 1}, 2), 0.375, 1e-15);
  EXPECT_THROW(cq_apply(w, std::vector<double>{1, 1, 1, 1}, 3), ConfigError);
  EXPECT_THROW(cq_apply(w, std::vector<double>{1, 1}, 2), ConfigError);
  EXPECT_THROW(cq_apply_rows(w, nullptr, 1, 3, {}), ConfigError);
}

TEST(CqApply, RowsMatchScalarApply) {
  const auto w = cq_weights(CqRule::sbd(), 0.7, 0.05, 12);
  const std::size_t dim = 5, n = 12;
  std::vector<double> hist((n + 1) * dim);
  for (std::size_t i = 0; i < hist.size(); ++i) hist[i] = std::sin(0.37 * static_cast<double>(i));
  for (std::size_t j_begin : {0u, 1u, 5u}) {
    std::vector<double> out(dim, 1.0);
    cq_apply_rows(w, hist.data(), dim, n, out, j_begin);
    for (std::size_t d = 0; d < dim; ++d) {
      double s = 1.0;
      for (std::size_t j = j_begin; j <= n; ++j) s += w[j] * hist[(n - j) * dim + d];
      EXPECT_NEAR(out[d], s, 1e-12);
    }
  }
}

TEST(CqStability, ScalarModeBackwardEuler) {
  for (double a : {0.1, 0.5, 0.9})
    for (double lam : {0.1, 1.0, 10.0, 100.0}) {
      const std::size_t N = 400;
      const auto w = cq_weights(CqRule::backward_euler(), a, 0.01, N);
      std::vector<double> u(N + 1);
      u[0] = 1.0;
      double prev = 1.0;
      for (std::size_t n = 1; n <= N; ++n) {
        double known = 0.0;
        for (std::size_t j = 1; j <= n; ++j) known += w[j] * (u[n - j] - 1.0);
        // w0 (u - 1) + known + lam u = 0
        u[n] = (w[0] - known) / (w[0] + lam);
        EXPECT_GT(u[n], 0.0);
        EXPECT_LE(u[n], prev + 1e-15);
        prev = u[n];
      }
    }
}

TEST(CqCache, SharedAndKeyed) {
  const auto a = cached_weights(RuleKind::SBD, 0.5, 0.01, 50);
  const auto b = cached_weights(RuleKind::SBD, 0.5, 0.01, 50);
  const auto c = cached_weights(RuleKind::BE, 0.5, 0.01, 50);
  EXPECT_EQ(a.get(), b.get());
  EXPECT_NE(a.get(), c.get());
  const auto direct = cq_weights(CqRule::sbd(), 0.5, 0.01, 50);
  EXPECT_EQ(a->weights, direct.weights);
}
