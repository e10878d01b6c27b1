#include "fracstep/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fracstep/errors.hpp"

namespace fracstep::schemes {

TimeGrid make_grid(double T, std::size_t N) {
  if (!(T > 0.0) || !std::isfinite(T)) throw ConfigError("final time must be positive");
  if (N < 1) throw ConfigError("step count must be at least 1");
  return {T, N};
}

void check_order(Equation equation, double alpha) {
  if (equation == Equation::subdiffusion && !(alpha > 0.0 && alpha < 1.0))
    throw ConfigError("subdiffusion needs 0 < alpha < 1");
  if (equation == Equation::diffusion_wave && !(alpha > 1.0 && alpha < 2.0))
    throw ConfigError("diffusion-wave needs 1 < alpha < 2");
}

std::string scheme_label(const SchemeConfig& cfg) {
  std::string s(cq::rule_name(cfg.stepper));
  s += cfg.source_corrected() ? " corrected" : " basic";
  s += cfg.equation == Equation::subdiffusion ? " subdiffusion" : " diffusion-wave";
  return s;
}

SolutionHistory solve(const SpatialSystem& sys, const DiscreteData& data, const CaseSpec& c, const SchemeConfig& cfg,
                      const TimeGrid& grid) {
  check_order(cfg.equation, c.alpha);
  if (cfg.equation != c.equation) throw ConfigError(std::string("case ") + c.id + " belongs to the other equation");
  const std::size_t dim = sys.n_dofs();
  if (data.v.size() != dim || data.b.size() != dim || data.f_load.size() != dim)
    throw ConfigError("data vectors do not match the spatial system");
  const std::size_t N = grid.N;
  const double tau = grid.tau();
  const bool sbd = cfg.stepper == cq::RuleKind::SBD;
  const bool wave = cfg.equation == Equation::diffusion_wave;
  const bool corrected = cfg.source_corrected();

  const auto w = cq::cached_weights(cfg.stepper, c.alpha, tau, N);
  const auto w1 = cq::cached_weights(cfg.stepper, 1.0, tau, N);

  Vector sv(dim);
  sys.apply_stiffness(data.v, sv);

  // W^n = U^n - v, one row per step, W^0 = 0.
  std::vector<double> W((N + 1) * dim, 0.0);
  SolutionHistory out;
  out.grid = grid;
  out.U.reserve(N + 1);
  out.U.push_back(data.v);
  out.solve_stats.reserve(N);

  Vector hist(dim), mhist(dim), rhs(dim);
  for (std::size_t n = 1; n <= N; ++n) {
    std::fill(hist.begin(), hist.end(), 0.0);
    cq::cq_apply_rows(*w, W.data(), dim, n, hist, 1);
    sys.apply_mass(hist, mhist);

    // First-step correction: (1/2) A_h U^0 moved right and (1/2) of the n = 0 source added.
    const double c1 = (sbd && n == 1) ? 1.5 : 1.0;
    double src = 0.0;
    if (c.has_f) {
      if (corrected) {
        for (std::size_t j = 0; j <= n; ++j) src += (*w1)[j] * c.F_time(grid.t(n - j));
        if (sbd && n == 1) src += 0.5 * (*w1)[0] * c.F_time(0.0);
      } else {
        src = c.f_time(grid.t(n));
        if (sbd && n == 1) src += 0.5 * c.f_time(0.0);
      }
    }
    double wave_n = 0.0;
    if (wave && c.has_b)
      for (std::size_t j = 0; j <= n; ++j) wave_n += (*w)[j] * grid.t(n - j);

    for (std::size_t i = 0; i < dim; ++i)
      rhs[i] = -mhist[i] - c1 * sv[i] + src * data.f_load[i] + wave_n * data.mass_b[i];

    std::span<double> wn(W.data() + n * dim, dim);
    std::copy(W.begin() + (n - 1) * dim, W.begin() + n * dim, wn.begin());
    out.solve_stats.push_back(sys.solve_shifted((*w)[0], 1.0, rhs, wn));

    Vector u(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      u[i] = wn[i] + data.v[i];
      if (!std::isfinite(u[i])) throw NumericalError("non-finite value at step " + std::to_string(n));
    }
    out.U.push_back(std::move(u));
  }
  return out;
}

SolutionHistory solve(const meshfem::FemSystem& sys, const CaseSpec& c, const SchemeConfig& cfg, const TimeGrid& grid) {
  const FemOperator op(sys);
  return solve(op, reference::discretize(sys, c, cfg.initial_projection), c, cfg, grid);
}

}  // namespace fracstep::schemes
