// Acceptance runner: one PASS/FAIL line per criterion; exit status 1 when any fails.
// Optional arguments select criteria by number.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include "fracstep/cq.hpp"
#include "fracstep/harness.hpp"
#include "fracstep/meshfem.hpp"
#include "fracstep/mlf.hpp"
#include "fracstep/reference.hpp"
#include "fracstep/schemes.hpp"
#include "oracles.hpp"

using namespace fracstep;
using harness::StudyConfig;
using harness::StudyKind;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [out of range]");
  }
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

bool in(double x, double lo, double hi) { return x >= lo && x <= hi; }

std::string tag(const harness::ConvergenceReport& r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "(%c) a=%g %s", r.case_id, r.alpha, r.scheme.c_str());
  return buf;
}

StudyConfig temporal(char id, std::vector<double> alphas, std::vector<std::string> schemes) {
  auto c = harness::default_config(StudyKind::temporal);
  c.case_id = id;
  c.alphas = std::move(alphas);
  c.schemes = std::move(schemes);
  c.M = {16};
  c.N = {10, 20, 40, 80, 160, 320};
  c.reference = harness::ReferenceMode::discrete_modal;
  return c;
}

Outcome temporal_subdiffusion() {
  Outcome o;
  for (char id : {'a', 'b'})
    for (const auto& r : harness::run_study(temporal(id, {0.1, 0.5, 0.9}, {"be", "sbd"}))) {
      const bool be = r.scheme == "be";
      o.check(be ? in(r.summary_rate, 0.9, 1.1) : in(r.summary_rate, 1.85, 2.15),
              tag(r) + fmt(" %.2f", r.summary_rate));
    }
  return o;
}

Outcome temporal_wave() {
  Outcome o;
  for (char id : {'d', 'e'}) {
    std::vector<std::string> schemes{"be", "sbd"};
    if (id == 'd') schemes.push_back("cn");
    for (const auto& r : harness::run_study(temporal(id, {1.1, 1.5, 1.9}, schemes))) {
      bool ok;
      if (r.scheme == "be") ok = in(r.summary_rate, 0.85, 1.1);
      else if (r.scheme == "sbd") ok = in(r.summary_rate, 1.8, 2.15);
      else ok = std::abs(r.summary_rate - (3.0 - r.alpha)) <= 0.2;
      o.check(ok, tag(r) + fmt(" %.2f", r.summary_rate));
    }
  }
  return o;
}

Outcome decay() {
  Outcome o;
  struct Item {
    char id;
    double alpha, t0, target, tol;
  };
  for (const auto& it : {Item{'a', 0.5, 1e-3, 0.50, 0.05}, Item{'b', 0.5, 1e-3, 0.13, 0.04},
                         Item{'d', 1.1, 1.0, 1.10, 0.15}, Item{'f', 1.1, 1.0, 1.28, 0.15}}) {
    auto c = harness::default_config(StudyKind::decay);
    c.case_id = it.id;
    c.alphas = {it.alpha};
    c.t = it.t0;
    const auto r = harness::run_study(c).front();
    o.check(std::abs(r.summary_rate - it.target) <= it.tol, tag(r) + fmt(" %.3f", r.summary_rate));
  }
  return o;
}

Outcome spatial() {
  Outcome o;
  const auto r = harness::run_study(harness::default_config(StudyKind::spatial)).front();
  o.check(in(r.summary_rate, 1.85, 2.15), tag(r) + fmt(" L2 %.2f", r.summary_rate));
  o.check(in(r.summary_rate_h1, 0.9, 1.2), fmt("H1 %.2f", r.summary_rate_h1));
  return o;
}

Outcome correction() {
  Outcome o;
  struct Item {
    char id;
    double alpha, basic_max;
  };
  for (const auto& it : {Item{'g', 1.5, 1.6}, Item{'c', 0.5, 1.5}}) {
    auto c = temporal(it.id, {it.alpha}, {"sbd"});
    c.corrected = true;
    const auto on = harness::run_study(c).front();
    c.corrected = false;
    const auto off = harness::run_study(c).front();
    o.check(on.summary_rate >= 1.9, tag(on) + fmt(" corrected %.2f", on.summary_rate));
    o.check(off.summary_rate <= it.basic_max, fmt("basic %.2f", off.summary_rate));
  }
  return o;
}

Outcome baselines_gap() {
  Outcome o;
  auto c = temporal('b', {0.5}, {"l1", "zeng1", "zeng2"});
  c.discretization = harness::Discretization::spectral;
  c.k_max = 255;
  for (const auto& r : harness::run_study(c)) {
    bool ok = r.scheme == "zeng1" ? r.summary_rate <= 1.0 : in(r.summary_rate, 0.9, 1.1);
    o.check(ok, tag(r) + fmt(" %.2f", r.summary_rate));
  }
  return o;
}

Outcome mlf_suite() {
  Outcome o;
  double worst = 0.0;
  for (double x = 0.0; x <= 100.0; x += 0.05) {
    const double ref = oracle::erfcx(x);
    worst = std::max(worst, std::abs(mlf::mlf({0.5, 1.0}, -x) - ref) / ref);
  }
  o.check(worst <= 1e-10, fmt("erfcx %.1e", worst));

  worst = 0.0;
  std::set<mlf::Regime> regimes;
  for (double a : {0.3, 0.5, 0.75, 0.9, 1.0, 1.2, 1.5, 1.8, 2.0})
    for (double b : {0.5, 1.0, 1.5, 2.0, 2.7})
      for (int i = 0; i <= 120; ++i) {
        const double x = 1e-2 * std::pow(1e6, i / 120.0);
        regimes.insert(mlf::select_regime({a, b}, -x));
        const double lhs = mlf::mlf({a, b}, -x);
        const double tail = -x * mlf::mlf({a, b + a}, -x);
        const double g = mlf::rgamma(b);
        const double scale = std::max({std::abs(lhs), std::abs(g), std::abs(tail)});
        worst = std::max(worst, std::abs(lhs - g - tail) / scale);
      }
  o.check(worst <= 1e-10 && regimes.size() == 4, fmt("recurrence %.1e over %g regimes", worst, regimes.size()));

  worst = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double x = 1e-3 * std::pow(1e6, i / 200.0);
    worst = std::max(worst, std::abs(mlf::mlf({1.0, 1.0}, -x) - std::exp(-x)) / std::exp(-x));
    const double e2 = -std::expm1(-x) / x;
    worst = std::max(worst, std::abs(mlf::mlf({1.0, 2.0}, -x) - e2) / e2);
  }
  o.check(worst <= 1e-12, fmt("E_{1,beta} %.1e", worst));
  return o;
}

Outcome cq_suite() {
  Outcome o;
  double worst = 0.0;
  for (const auto& rule : {cq::CqRule::backward_euler(), cq::CqRule::sbd()})
    for (double a : {0.1, 0.5, 0.9, 1.1, 1.5, 1.9}) {
      const auto r = cq::cq_weights(rule, a, 1.0, 512);
      const auto f = cq::cq_weights_fft(rule, a, 1.0, 512);
      double d = 0.0, m = 0.0;
      for (std::size_t j = 0; j <= 512; ++j) {
        d = std::max(d, std::abs(r[j] - f[j]));
        m = std::max(m, std::abs(r[j]));
      }
      worst = std::max(worst, d / m);
    }
  o.check(worst <= 1e-12, fmt("recurrence vs transform %.1e", worst));

  worst = 0.0;
  for (const auto& rule : {cq::CqRule::backward_euler(), cq::CqRule::sbd()})
    for (double a : {0.3, 0.5, 0.9})
      for (double b : {0.2, 0.7, 1.1}) {
        const std::size_t N = 512;
        const auto wa = cq::cq_weights(rule, a, 1.0, N), wb = cq::cq_weights(rule, b, 1.0, N);
        const auto wab = cq::cq_weights(rule, a + b, 1.0, N);
        double d = 0.0, m = 0.0;
        for (std::size_t n = 0; n <= N; ++n) {
          double s = 0.0;
          for (std::size_t j = 0; j <= n; ++j) s += wa[j] * wb[n - j];
          d = std::max(d, std::abs(s - wab[n]));
          m = std::max(m, std::abs(wab[n]));
        }
        worst = std::max(worst, d / m);
      }
  o.check(worst <= 1e-12, fmt("composition %.1e", worst));

  const double tau = 1.0 / 64.0;  // dyadic: samples and weights are exact
  const auto w = cq::cq_weights(cq::CqRule::sbd(), 1.0, tau, 200);
  std::vector<double> g(201);
  for (std::size_t m = 0; m <= 200; ++m) g[m] = tau * static_cast<double>(m);
  worst = 0.0;
  for (std::size_t n = 0; n <= 200; ++n) {
    const double expect = n == 0 ? 0.0 : (n == 1 ? 1.5 : 1.0);
    worst = std::max(worst, std::abs(cq::cq_apply(w, g, n) - expect));
  }
  o.check(worst <= 1e-14, fmt("1_tau %.1e", worst));
  return o;
}

Outcome scheme_oracle() {
  Outcome o;
  const auto sys = meshfem::assemble(meshfem::build_mesh(2));
  const FemOperator op(sys, 1e-15);
  auto ft = [](double t) { return 1.0 + std::pow(t, 0.2); };
  auto Ft = [](double t) { return t + std::pow(t, 1.2) / 1.2; };
  struct Variant {
    cq::RuleKind stepper;
    bool wave, corrected;
    const char* name;
  };
  double worst = 0.0;
  for (const auto& v : {Variant{cq::RuleKind::BE, false, false, "BE subdiffusion"},
                        Variant{cq::RuleKind::SBD, false, false, "SBD subdiffusion"},
                        Variant{cq::RuleKind::BE, true, false, "BE basic wave"},
                        Variant{cq::RuleKind::BE, true, true, "BE corrected wave"},
                        Variant{cq::RuleKind::SBD, true, true, "SBD corrected wave"},
                        Variant{cq::RuleKind::SBD, true, false, "SBD basic wave"}})
    for (double alpha : v.wave ? std::vector<double>{1.1, 1.5, 1.9} : std::vector<double>{0.1, 0.5, 0.9}) {
      auto c = reference::make_case(v.wave ? 'g' : 'c', alpha);
      c.has_b = v.wave;
      c.f_time = ft;
      c.F_time = Ft;
      oracle::ScalarProblem p;
      p.alpha = alpha;
      p.N = 16;
      p.sbd = v.stepper == cq::RuleKind::SBD;
      p.wave = v.wave;
      p.corrected = v.corrected;
      p.v = 0.7;
      p.b = v.wave ? -0.4 : 0.0;
      p.load = 0.03;
      p.f_time = +ft;
      p.G_time = +Ft;
      const auto ref = oracle::scalar_recursion(p);
      const DiscreteData data{{p.v}, {p.b}, {p.load}, {p.m * p.v}, {p.m * p.b}};
      schemes::SchemeConfig cfg{v.stepper, c.equation, v.corrected};
      const auto h = schemes::solve(op, data, c, cfg, schemes::make_grid(p.T, p.N));
      for (std::size_t n = 0; n <= p.N; ++n)
        worst = std::max(worst, std::abs(h.U[n][0] - ref[n]) / std::max(1.0, std::abs(ref[n])));
    }
  o.check(worst <= 1e-12, fmt("single dof, six variants %.1e", worst));

  const auto fem = meshfem::assemble(meshfem::build_mesh(16));
  const FemOperator fop(fem, 1e-14);
  const auto c = reference::make_case('a', 1.0 - 1e-12);
  const auto data = reference::discretize(fem, c);
  const auto grid = schemes::make_grid(0.1, 40);
  const auto h = schemes::solve(fop, data, c, schemes::SchemeConfig{}, grid);
  Vector u = data.v, mu(u.size()), rhs(u.size()), d(u.size());
  worst = 0.0;
  for (std::size_t n = 1; n <= grid.N; ++n) {
    fop.apply_mass(u, mu);
    for (std::size_t i = 0; i < u.size(); ++i) rhs[i] = mu[i] / grid.tau();
    Vector next = u;
    fop.solve_shifted(1.0 / grid.tau(), 1.0, rhs, next);
    u = next;
    for (std::size_t i = 0; i < u.size(); ++i) d[i] = h.U[n][i] - u[i];
    worst = std::max(worst, meshfem::l2_norm(fem, d) / meshfem::l2_norm(fem, u));
  }
  o.check(worst <= 1e-9, fmt("alpha->1 heat limit %.1e", worst));
  return o;
}

Outcome fem_suite() {
  Outcome o;
  bool stencil = true;
  for (int M : {4, 8, 16, 32}) {
    const auto sys = meshfem::assemble(meshfem::build_mesh(M));
    const auto& mesh = sys.mesh;
    auto dof = [&](int i, int j) { return mesh.interior_map[j * (M + 1) + i]; };
    for (int j = 1; j < M; ++j)
      for (int i = 1; i < M; ++i) {
        const auto d = dof(i, j);
        stencil = stencil && sys.stiffness.at(d, d) == 4.0;
        const int nb[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
        for (const auto& s : nb) {
          const int a = i + s[0], b = j + s[1];
          if (a > 0 && a < M && b > 0 && b < M) stencil = stencil && sys.stiffness.at(d, dof(a, b)) == -1.0;
        }
        for (const auto& s : {std::array<int, 2>{1, 1}, std::array<int, 2>{-1, -1}, std::array<int, 2>{1, -1},
                              std::array<int, 2>{-1, 1}}) {
          const int a = i + s[0], b = j + s[1];
          if (a > 0 && a < M && b > 0 && b < M) stencil = stencil && sys.stiffness.at(d, dof(a, b)) == 0.0;
        }
      }
  }
  o.check(stencil, "five-point stencil exact");

  std::vector<double> err;
  bool above = true;
  for (int M : {4, 8, 16, 32}) {
    const auto basis = reference::discrete_basis(meshfem::assemble(meshfem::build_mesh(M)));
    const double e = basis->values[0] - 2.0 * kPi * kPi;
    above = above && e > 0.0;
    err.push_back(e);
  }
  o.check(above, "lambda_h above 2 pi^2");
  for (std::size_t i = 0; i + 1 < err.size(); ++i) {
    const double ratio = err[i] / err[i + 1];
    o.check(in(ratio, 3.2, 4.8), fmt("ratio %.2f", ratio));
  }
  return o;
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "temporal rates, subdiffusion", temporal_subdiffusion},
      {2, "temporal rates, diffusion-wave", temporal_wave},
      {3, "decay exponents", decay},
      {4, "spatial rates", spatial},
      {5, "source correction necessity", correction},
      {6, "baseline robustness gap", baselines_gap},
      {7, "Mittag-Leffler oracle suite", mlf_suite},
      {8, "convolution quadrature weight oracles", cq_suite},
      {9, "scheme oracle", scheme_oracle},
      {10, "finite element suite", fem_suite},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failed = 0;
  for (const auto& c : all) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %2d %s (%.1fs): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
