#include "fracstep/baselines.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "fracstep/errors.hpp"

namespace fracstep::baselines {

namespace {

using reference::Equation;
using schemes::SolutionHistory;
using schemes::TimeGrid;

// Flat row storage for the stepping history.
struct Rows {
  std::size_t dim;
  std::vector<double> data;

  Rows(std::size_t dim_, std::size_t count) : dim(dim_), data(dim_ * count, 0.0) {}
  std::span<double> row(std::size_t k) { return {data.data() + k * dim, dim}; }
  const double* ptr(std::size_t k) const { return data.data() + k * dim; }
};

void finish_step(SolutionHistory& out, std::span<const double> u, std::size_t n) {
  for (double x : u)
    if (!std::isfinite(x)) throw NumericalError("non-finite value at step " + std::to_string(n));
  out.U.emplace_back(u.begin(), u.end());
}

SolutionHistory solve_l1(const SpatialSystem& sys, const DiscreteData& data, const reference::CaseSpec& c,
                         const TimeGrid& grid) {
  const std::size_t dim = sys.n_dofs(), N = grid.N;
  const double a = c.alpha;
  const double coef = std::pow(grid.tau(), -a) / std::tgamma(2.0 - a);
  const auto b = l1_coefficients(a, N);
  Rows U(dim, N + 1), D(dim, N + 1);
  std::copy(data.v.begin(), data.v.end(), U.row(0).begin());

  SolutionHistory out;
  out.grid = grid;
  out.U.push_back(data.v);
  Vector acc(dim), rhs(dim), wts;
  for (std::size_t n = 1; n <= N; ++n) {
    // acc = b_0 U^{n-1} - sum_{k=1}^{n-1} b_{n-k} D^k
    auto prev = U.row(n - 1);
    for (std::size_t i = 0; i < dim; ++i) acc[i] = b[0] * prev[i];
    if (n > 1) {
      wts.assign(n - 1, 0.0);
      for (std::size_t k = 1; k < n; ++k) wts[k - 1] = -b[n - k];
      kernels::weighted_row_sum(wts, D.ptr(1), dim, acc);
    }
    sys.apply_mass(acc, rhs);
    const double src = c.has_f ? c.f_time(grid.t(n)) : 0.0;
    for (std::size_t i = 0; i < dim; ++i) rhs[i] = coef * rhs[i] + src * data.f_load[i];
    auto un = U.row(n);
    std::copy(prev.begin(), prev.end(), un.begin());
    out.solve_stats.push_back(sys.solve_shifted(coef * b[0], 1.0, rhs, un));
    auto dn = D.row(n);
    for (std::size_t i = 0; i < dim; ++i) dn[i] = un[i] - prev[i];
    finish_step(out, un, n);
  }
  return out;
}

SolutionHistory solve_zeng(const SpatialSystem& sys, const DiscreteData& data, const reference::CaseSpec& c,
                           BaselineKind kind, const TimeGrid& grid) {
  const std::size_t dim = sys.n_dofs(), N = grid.N;
  const double a = c.alpha;
  const double scale = std::pow(grid.tau(), -a);
  const auto w = cq::cached_weights(cq::RuleKind::BE, a, 1.0, N);
  const auto ell = zeng_rhs_weights(kind, a, N);
  Rows U(dim, N + 1), W(dim, N + 1);
  std::copy(data.v.begin(), data.v.end(), U.row(0).begin());

  SolutionHistory out;
  out.grid = grid;
  out.U.push_back(data.v);
  Vector hist(dim), mix(dim), mhist(dim), smix(dim), rhs(dim), wts;
  for (std::size_t n = 1; n <= N; ++n) {
    std::fill(hist.begin(), hist.end(), 0.0);
    cq::cq_apply_rows(*w, W.data.data(), dim, n, hist, 1);
    std::fill(mix.begin(), mix.end(), 0.0);
    wts.assign(n, 0.0);
    for (std::size_t m = 0; m < n; ++m) wts[m] = ell[n - m];  // rows U^0..U^{n-1}
    kernels::weighted_row_sum(wts, U.ptr(0), dim, mix);
    sys.apply_mass(hist, mhist);
    sys.apply_stiffness(mix, smix);
    double src = 0.0;
    if (c.has_f)
      for (std::size_t j = 0; j <= n; ++j) src += ell[j] * c.f_time(grid.t(n - j));
    for (std::size_t i = 0; i < dim; ++i)
      rhs[i] = scale * ((*w)[0] * data.mass_v[i] - mhist[i]) - smix[i] + src * data.f_load[i];
    auto un = U.row(n);
    std::copy(U.row(n - 1).begin(), U.row(n - 1).end(), un.begin());
    out.solve_stats.push_back(sys.solve_shifted(scale * (*w)[0], ell[0], rhs, un));
    auto wn = W.row(n);
    for (std::size_t i = 0; i < dim; ++i) wn[i] = un[i] - data.v[i];
    finish_step(out, un, n);
  }
  return out;
}

SolutionHistory solve_cn(const SpatialSystem& sys, const DiscreteData& data, const reference::CaseSpec& c,
                         const TimeGrid& grid) {
  const std::size_t dim = sys.n_dofs(), N = grid.N;
  const double a = c.alpha, tau = grid.tau();
  const double coef = std::pow(tau, -a) / std::tgamma(3.0 - a);
  const auto A = cn_coefficients(a, N);
  Rows U(dim, N + 1), D(dim, N + 1);
  std::copy(data.v.begin(), data.v.end(), U.row(0).begin());

  SolutionHistory out;
  out.grid = grid;
  out.U.push_back(data.v);
  Vector acc(dim), macc(dim), sprev(dim), rhs(dim), wts;
  for (std::size_t n = 1; n <= N; ++n) {
    // acc = a_0 U^{n-1} + sum_{j=1}^{n-1} (a_{n-j-1} - a_{n-j}) D^j + a_{n-1} tau b
    auto prev = U.row(n - 1);
    for (std::size_t i = 0; i < dim; ++i) acc[i] = A[0] * prev[i] + A[n - 1] * tau * data.b[i];
    if (n > 1) {
      wts.assign(n - 1, 0.0);
      for (std::size_t j = 1; j < n; ++j) wts[j - 1] = A[n - j - 1] - A[n - j];
      kernels::weighted_row_sum(wts, D.ptr(1), dim, acc);
    }
    sys.apply_mass(acc, macc);
    sys.apply_stiffness(prev, sprev);
    const double src = c.has_f ? c.f_time(0.5 * (grid.t(n - 1) + grid.t(n))) : 0.0;
    for (std::size_t i = 0; i < dim; ++i) rhs[i] = coef * macc[i] - 0.5 * sprev[i] + src * data.f_load[i];
    auto un = U.row(n);
    std::copy(prev.begin(), prev.end(), un.begin());
    out.solve_stats.push_back(sys.solve_shifted(coef * A[0], 0.5, rhs, un));
    auto dn = D.row(n);
    for (std::size_t i = 0; i < dim; ++i) dn[i] = un[i] - prev[i];
    finish_step(out, un, n);
  }
  return out;
}

}  // namespace

std::string_view baseline_name(BaselineKind kind) noexcept {
  switch (kind) {
    case BaselineKind::L1: return "L1";
    case BaselineKind::ZengI: return "Zeng I";
    case BaselineKind::ZengII: return "Zeng II";
    case BaselineKind::CrankNicolson: return "CN";
  }
  return "?";
}

BaselineKind parse_baseline(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (s == "l1") return BaselineKind::L1;
  if (s == "zeng1" || s == "zengi") return BaselineKind::ZengI;
  if (s == "zeng2" || s == "zengii") return BaselineKind::ZengII;
  if (s == "cn") return BaselineKind::CrankNicolson;
  throw ConfigError("unknown baseline '" + std::string(name) + "' (expected l1, zeng1, zeng2, cn)");
}

Equation baseline_equation(BaselineKind kind) noexcept {
  return kind == BaselineKind::CrankNicolson ? Equation::diffusion_wave : Equation::subdiffusion;
}

std::vector<double> l1_coefficients(double alpha, std::size_t n) {
  std::vector<double> b(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = static_cast<double>(j);
    b[j] = std::pow(x + 1.0, 1.0 - alpha) - std::pow(x, 1.0 - alpha);
  }
  return b;
}

std::vector<double> cn_coefficients(double alpha, std::size_t n) {
  std::vector<double> a(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = static_cast<double>(j);
    a[j] = std::pow(x + 1.0, 2.0 - alpha) - std::pow(x, 2.0 - alpha);
  }
  return a;
}

std::vector<double> zeng_rhs_weights(BaselineKind kind, double alpha, std::size_t n) {
  std::vector<double> ell(n + 1, 0.0);
  if (kind == BaselineKind::ZengI) {
    const auto w = cq::cached_weights(cq::RuleKind::BE, alpha, 1.0, n);
    const double s = std::pow(2.0, -alpha);
    for (std::size_t j = 0; j <= n; ++j) ell[j] = (j % 2 ? -s : s) * (*w)[j];
  } else if (kind == BaselineKind::ZengII) {
    ell[0] = 1.0 - 0.5 * alpha;
    if (n >= 1) ell[1] = 0.5 * alpha;
  } else {
    throw ConfigError("right-hand-side weights exist only for the Zeng schemes");
  }
  return ell;
}

schemes::SolutionHistory solve_baseline(const SpatialSystem& sys, const DiscreteData& data,
                                        const reference::CaseSpec& c, BaselineKind kind, const TimeGrid& grid) {
  const Equation eq = baseline_equation(kind);
  schemes::check_order(eq, c.alpha);
  if (c.equation != eq)
    throw ConfigError(std::string(baseline_name(kind)) + " does not apply to case " + std::string(1, c.id));
  const std::size_t dim = sys.n_dofs();
  if (data.v.size() != dim || data.b.size() != dim || data.f_load.size() != dim)
    throw ConfigError("data vectors do not match the spatial system");
  switch (kind) {
    case BaselineKind::L1: return solve_l1(sys, data, c, grid);
    case BaselineKind::ZengI:
    case BaselineKind::ZengII: return solve_zeng(sys, data, c, kind, grid);
    case BaselineKind::CrankNicolson: return solve_cn(sys, data, c, grid);
  }
  throw ConfigError("unknown baseline");
}

schemes::SolutionHistory solve_baseline(const meshfem::FemSystem& sys, const reference::CaseSpec& c,
                                        BaselineKind kind, const TimeGrid& grid) {
  const FemOperator op(sys);
  return solve_baseline(op, reference::discretize(sys, c), c, kind, grid);
}

}  // namespace fracstep::baselines
