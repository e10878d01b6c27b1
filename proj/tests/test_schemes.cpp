#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "fracstep/errors.hpp"
#include "fracstep/reference.hpp"
#include "fracstep/schemes.hpp"
#include "oracles.hpp"

using namespace fracstep;
using namespace fracstep::schemes;
using reference::make_case;

namespace {

double ft(double t) { return 1.0 + std::pow(t, 0.2); }
double Ft(double t) { return t + std::pow(t, 1.2) / 1.2; }

DiscreteData scalar_data(double m, double v, double b, double load) { return {{v}, {b}, {load}, {m * v}, {m * b}}; }

double l2_diff(const meshfem::FemSystem& sys, const Vector& a, const Vector& b) {
  Vector d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return meshfem::l2_norm(sys, d);
}

DiscreteData sum(const DiscreteData& x, const DiscreteData& y) {
  auto add = [](const Vector& a, const Vector& b) {
    Vector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
  };
  return {add(x.v, y.v), add(x.b, y.b), add(x.f_load, y.f_load), add(x.mass_v, y.mass_v), add(x.mass_b, y.mass_b)};
}

DiscreteData zero_like(const DiscreteData& x) {
  const Vector z(x.v.size(), 0.0);
  return {z, z, z, z, z};
}

}  // namespace

TEST(Grid, Validation) {
  const auto g = make_grid(0.1, 4);
  EXPECT_DOUBLE_EQ(g.tau(), 0.025);
  EXPECT_EQ(g.t(4), 0.1);
  EXPECT_THROW(make_grid(0.0, 4), ConfigError);
  EXPECT_THROW(make_grid(0.1, 0), ConfigError);
  EXPECT_THROW(check_order(Equation::subdiffusion, 1.2), ConfigError);
  EXPECT_THROW(check_order(Equation::diffusion_wave, 0.7), ConfigError);
  EXPECT_NO_THROW(check_order(Equation::diffusion_wave, 1.7));
}

TEST(Schemes, LabelsAndDefaults) {
  SchemeConfig cfg;
  EXPECT_FALSE(cfg.source_corrected());
  cfg.equation = Equation::diffusion_wave;
  EXPECT_TRUE(cfg.source_corrected());
  cfg.corrected = false;
  EXPECT_FALSE(cfg.source_corrected());
  cfg.stepper = cq::RuleKind::SBD;
  EXPECT_FALSE(scheme_label(cfg).empty());
}

TEST(Schemes, RejectsMismatchedEquation) {
  const auto sys = meshfem::assemble(meshfem::build_mesh(4));
  SchemeConfig cfg;
  cfg.equation = Equation::diffusion_wave;
  EXPECT_THROW(solve(sys, make_case('a', 0.5), cfg, make_grid(0.1, 4)), ConfigError);
}

TEST(Schemes, SingleDofHandExample) {
  const auto sys = meshfem::assemble(meshfem::build_mesh(2));
  const FemOperator op(sys);
  auto c = make_case('a', 0.5);
  const auto h = solve(op, scalar_data(0.125, 1.0, 0.0, 0.0), c, SchemeConfig{}, make_grid(0.1, 1));
  const double w0 = std::pow(0.1, -0.5);
  EXPECT_NEAR(h.U[1][0], w0 * 0.125 / (w0 * 0.125 + 4.0), 1e-14);
  EXPECT_NEAR(h.U[1][0], 0.089934, 1e-6);
}

struct Variant {
  cq::RuleKind stepper;
  bool wave;
  bool corrected;
};

class SingleDofOracle : public ::testing::TestWithParam<Variant> {};

TEST_P(SingleDofOracle, MatchesScalarRecursion) {
  const auto [stepper, wave, corrected] = GetParam();
  const auto sys = meshfem::assemble(meshfem::build_mesh(2));
  const FemOperator op(sys, 1e-15);
  for (double alpha : wave ? std::vector<double>{1.1, 1.5, 1.9} : std::vector<double>{0.1, 0.5, 0.9}) {
    auto c = make_case(wave ? 'g' : 'c', alpha);
    c.has_b = wave;
    c.f_time = ft;
    c.F_time = Ft;
    oracle::ScalarProblem p;
    p.alpha = alpha;
    p.N = 12;
    p.T = 0.1;
    p.sbd = stepper == cq::RuleKind::SBD;
    p.wave = wave;
    p.corrected = corrected;
    p.v = 0.7;
    p.b = wave ? -0.4 : 0.0;
    p.load = 0.03;
    p.f_time = ft;
    p.G_time = Ft;
    const auto ref = oracle::scalar_recursion(p);
    SchemeConfig cfg{stepper, wave ? Equation::diffusion_wave : Equation::subdiffusion, corrected};
    const auto h = solve(op, scalar_data(p.m, p.v, p.b, p.load), c, cfg, make_grid(p.T, p.N));
    ASSERT_EQ(h.U.size(), p.N + 1);
    for (std::size_t n = 0; n <= p.N; ++n)
      EXPECT_NEAR(h.U[n][0], ref[n], 1e-12 * std::max(1.0, std::abs(ref[n]))) << "alpha=" << alpha << " n=" << n;
  }
}

INSTANTIATE_TEST_SUITE_P(Variants, SingleDofOracle,
                         ::testing::Values(Variant{cq::RuleKind::BE, false, false},
                                           Variant{cq::RuleKind::BE, false, true},
                                           Variant{cq::RuleKind::SBD, false, false},
                                           Variant{cq::RuleKind::SBD, false, true},
                                           Variant{cq::RuleKind::BE, true, false},
                                           Variant{cq::RuleKind::BE, true, true},
                                           Variant{cq::RuleKind::SBD, true, false},
                                           Variant{cq::RuleKind::SBD, true, true}));

TEST(Schemes, HeatLimitOfBackwardEuler) {
  const auto sys = meshfem::assemble(meshfem::build_mesh(8));
  const FemOperator op(sys, 1e-14);
  const auto c = make_case('a', 1.0 - 1e-12);
  const auto data = reference::discretize(sys, c);
  const auto grid = make_grid(0.1, 20);
  const auto h = solve(op, data, c, SchemeConfig{}, grid);
  const double tau = grid.tau();
  Vector u = data.v, mu(u.size()), rhs(u.size());
  for (std::size_t n = 1; n <= grid.N; ++n) {
    op.apply_mass(u, mu);
    for (std::size_t i = 0; i < u.size(); ++i) rhs[i] = mu[i] / tau;
    Vector next = u;
    op.solve_shifted(1.0 / tau, 1.0, rhs, next);
    u = next;
    EXPECT_LE(l2_diff(sys, h.U[n], u), 1e-9 * meshfem::l2_norm(sys, u)) << "n=" << n;
  }
}

TEST(Schemes, L2StabilityWithoutSource) {
  const auto sys = meshfem::assemble(meshfem::build_mesh(8));
  for (char id : {'a', 'b'})
    for (double alpha : {0.1, 0.5, 0.9})
      for (auto stepper : {cq::RuleKind::BE, cq::RuleKind::SBD}) {
        const auto c = make_case(id, alpha);
        SchemeConfig cfg;
        cfg.stepper = stepper;
        const auto h = solve(sys, c, cfg, make_grid(1.0, 64));
        const double n0 = meshfem::l2_norm(sys, h.U[0]);
        for (const auto& U : h.U) {
          for (double x : U) ASSERT_TRUE(std::isfinite(x));
          EXPECT_LE(meshfem::l2_norm(sys, U), n0 * (1.0 + 1e-10));
        }
      }
}

TEST(Schemes, SuperpositionOfData) {
  const auto sys = meshfem::assemble(meshfem::build_mesh(8));
  const FemOperator op(sys, 1e-14);
  for (bool wave : {false, true})
    for (auto stepper : {cq::RuleKind::BE, cq::RuleKind::SBD}) {
      const double alpha = wave ? 1.5 : 0.5;
      auto c = make_case(wave ? 'g' : 'c', alpha);
      c.has_b = wave;
      auto with_v = reference::discretize(sys, make_case(wave ? 'd' : 'a', alpha));
      auto with_b = reference::discretize(sys, make_case(wave ? 'f' : 'a', alpha));
      auto with_f = reference::discretize(sys, c);
      with_v.f_load.assign(with_v.f_load.size(), 0.0);
      with_b.f_load.assign(with_b.f_load.size(), 0.0);
      if (wave) {
        with_v.b.assign(with_v.b.size(), 0.0);
        with_v.mass_b.assign(with_v.b.size(), 0.0);
        with_b.v.assign(with_b.v.size(), 0.0);
        with_b.mass_v.assign(with_b.v.size(), 0.0);
      } else {
        with_b = zero_like(with_v);
      }
      const auto total = sum(sum(with_v, with_b), with_f);
      SchemeConfig cfg{stepper, wave ? Equation::diffusion_wave : Equation::subdiffusion, std::nullopt};
      const auto grid = make_grid(0.1, 16);
      const auto hv = solve(op, with_v, c, cfg, grid);
      const auto hb = solve(op, with_b, c, cfg, grid);
      const auto hf = solve(op, with_f, c, cfg, grid);
      const auto ht = solve(op, total, c, cfg, grid);
      for (std::size_t n = 0; n <= grid.N; ++n) {
        Vector s(ht.U[n].size());
        for (std::size_t i = 0; i < s.size(); ++i) s[i] = hv.U[n][i] + hb.U[n][i] + hf.U[n][i];
        EXPECT_LE(l2_diff(sys, ht.U[n], s), 1e-10 * std::max(1.0, meshfem::l2_norm(sys, ht.U[n]))) << n;
      }
    }
}

TEST(Schemes, TemporalRatesAgainstDiscreteReference) {
  const auto sys = meshfem::assemble(meshfem::build_mesh(16));
  struct Item {
    char id;
    double alpha;
  };
  for (const auto [id, alpha] : {Item{'a', 0.5}, Item{'b', 0.5}, Item{'d', 1.5}, Item{'e', 1.5}, Item{'f', 1.5}}) {
    const auto c = make_case(id, alpha);
    const auto ref = reference::discrete_reference(sys, c, 0.1);
    for (auto stepper : {cq::RuleKind::BE, cq::RuleKind::SBD}) {
      SchemeConfig cfg;
      cfg.stepper = stepper;
      cfg.equation = c.equation;
      std::vector<double> err;
      for (std::size_t N : {40u, 80u, 160u}) err.push_back(l2_diff(sys, solve(sys, c, cfg, make_grid(0.1, N)).final(), ref));
      const double rate = 0.5 * (std::log2(err[0] / err[1]) + std::log2(err[1] / err[2]));
      if (stepper == cq::RuleKind::BE) {
        EXPECT_NEAR(rate, 1.0, 0.1) << id;
      } else {
        EXPECT_NEAR(rate, 2.0, 0.15) << id;
      }
    }
  }
}
