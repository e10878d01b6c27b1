#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <memory>
#include <string>
#include <thread>

#include "fracstep/baselines.hpp"
#include "fracstep/errors.hpp"
#include "fracstep/harness.hpp"

namespace fracstep::harness {

namespace {

using reference::CaseSpec;
using reference::ModalExpansion;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool is_cq_scheme(std::string_view s) { return s == "be" || s == "sbd"; }

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char ch) { return std::tolower(ch); });
  return out;
}

void check_scheme(std::string_view s, reference::Equation eq) {
  if (is_cq_scheme(s)) return;
  const auto kind = baselines::parse_baseline(s);
  if (baselines::baseline_equation(kind) != eq)
    throw ConfigError("scheme '" + std::string(s) + "' does not apply to this equation");
}

// A prepared spatial problem at one (case, alpha, mesh) and its reference solutions.
class Setup {
 public:
  Setup(const StudyConfig& cfg, double alpha, int M) : cfg_(cfg), case_(reference::make_case(cfg.case_id, alpha)) {
    if (cfg.discretization == Discretization::spectral) {
      modes_ = reference::modal_coefficients(case_, cfg.k_max);
      data_ = reference::discretize(modes_);
      system_ = std::make_unique<ModalSystem>(reference::modal_system(modes_));
      return;
    }
    fem_ = std::make_unique<meshfem::FemSystem>(meshfem::assemble(meshfem::build_mesh(M)));
    data_ = reference::discretize(*fem_, case_, cfg.projection);
    system_ = std::make_unique<FemOperator>(*fem_);
    if (cfg.reference == ReferenceMode::discrete_modal) modes_ = reference::discrete_expansion(*fem_, data_);
    if (cfg.reference == ReferenceMode::continuous_modal) modes_ = reference::modal_coefficients(case_, cfg.k_max);
  }

  const CaseSpec& case_spec() const { return case_; }
  std::size_t n_dofs() const { return system_->n_dofs(); }
  double tail_bound() const {
    return cfg_.reference == ReferenceMode::continuous_modal || cfg_.discretization == Discretization::spectral
               ? modes_.tail_bound
               : 0.0;
  }

  // Builds the reference at t.
  void prepare(double t) {
    if (refs_.count(t)) return;
    Reference r;
    if (cfg_.reference == ReferenceMode::self_convergence) {
      const std::size_t n_max = *std::max_element(cfg_.N.begin(), cfg_.N.end());
      const auto h = run("sbd", cfg_.self_convergence_factor * n_max, t, true);
      r.field = h.final();
    } else {
      r.amplitudes = reference::modal_amplitudes(modes_, case_, t);
      if (fem_ && cfg_.reference == ReferenceMode::continuous_modal)
        r.sampled = reference::sample_modal_field(modes_, r.amplitudes, fem_->mesh);
    }
    refs_.emplace(t, std::move(r));
  }

  schemes::SolutionHistory run(std::string_view scheme, std::size_t N, double T,
                               std::optional<bool> corrected) const {
    return run_scheme(*system_, data_, case_, scheme, corrected, schemes::make_grid(T, N));
  }

  // Unnormalized (L2, H1) error of the final state at t.
  std::pair<double, double> error(std::span<const double> u, double t) const {
    const Reference& r = refs_.at(t);
    if (cfg_.reference == ReferenceMode::self_convergence) {
      Vector d(u.begin(), u.end());
      for (std::size_t i = 0; i < d.size(); ++i) d[i] -= r.field[i];
      if (fem_) return {meshfem::l2_norm(*fem_, d), meshfem::h1_seminorm(*fem_, d)};
      return modal_norms(d, {});
    }
    if (fem_ && cfg_.reference == ReferenceMode::continuous_modal) {
      const auto e = meshfem::error_norms(*fem_, u, r.sampled);
      return {e.l2, e.h1};
    }
    if (fem_) return modal_norms(reference::analyze(*fem_, modes_, u), r.amplitudes);
    return modal_norms(u, r.amplitudes);
  }

 private:
  struct Reference {
    std::vector<double> amplitudes;
    meshfem::SampledField sampled;
    Vector field;
  };

  // Norms of c - a in an eigen-coordinate system with Mass = I.
  std::pair<double, double> modal_norms(std::span<const double> c, std::span<const double> a) const {
    double l2 = 0.0, h1 = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) {
      const double d = c[j] - (a.empty() ? 0.0 : a[j]);
      l2 += d * d;
      h1 += modes_.lambda[j] * d * d;
    }
    return {std::sqrt(l2), std::sqrt(h1)};
  }

  const StudyConfig& cfg_;
  CaseSpec case_;
  std::unique_ptr<meshfem::FemSystem> fem_;
  std::unique_ptr<SpatialSystem> system_;
  DiscreteData data_;
  ModalExpansion modes_;
  std::map<double, Reference> refs_;
};

std::string fmt_label(StudyKind kind, double x) {
  char buf[64];
  if (kind == StudyKind::temporal) std::snprintf(buf, sizeof buf, "N=%.0f", x);
  else if (kind == StudyKind::spatial) std::snprintf(buf, sizeof buf, "M=%.0f", x);
  else std::snprintf(buf, sizeof buf, "t=%g", x);
  return buf;
}

ConvergenceReport run_one(const StudyConfig& cfg, double alpha, const std::string& scheme) {
  ConvergenceReport rep;
  rep.case_id = cfg.case_id;
  rep.alpha = alpha;
  rep.scheme = scheme;
  rep.kind = cfg.kind;
  rep.reference = cfg.reference;
  rep.discretization = cfg.discretization;
  rep.theoretical_rate = theoretical_rate(cfg, alpha, scheme);

  std::vector<double> xs;
  std::vector<std::pair<double, double>> errs;
  double norm = 1.0;

  if (cfg.kind == StudyKind::spatial) {
    for (int m : cfg.M) xs.push_back(m);
    errs.resize(xs.size());
    std::vector<std::unique_ptr<Setup>> setups(cfg.M.size());
    parallel_for(cfg.M.size(), [&](std::size_t i) {
      setups[i] = std::make_unique<Setup>(cfg, alpha, cfg.M[i]);
      setups[i]->prepare(cfg.t);
      const auto h = setups[i]->run(scheme, cfg.N.front(), cfg.t, cfg.corrected);
      errs[i] = setups[i]->error(h.final(), cfg.t);
    });
    const auto& c = setups.front()->case_spec();
    rep.normalized = c.has_v;
    norm = c.has_v ? c.v_norm : 1.0;
  } else {
    Setup setup(cfg, alpha, cfg.M.front());
    const auto& c = setup.case_spec();
    rep.normalized = c.has_v;
    norm = c.has_v ? c.v_norm : 1.0;
    std::vector<double> times;
    if (cfg.kind == StudyKind::temporal) {
      for (auto n : cfg.N) xs.push_back(static_cast<double>(n));
      times.assign(1, cfg.t);
    } else {
      for (int d = 0; d < cfg.decades; ++d) times.push_back(cfg.t * std::pow(10.0, -d));
      xs = times;
    }
    for (double t : times) setup.prepare(t);
    errs.resize(xs.size());
    parallel_for(xs.size(), [&](std::size_t i) {
      const double t = cfg.kind == StudyKind::temporal ? cfg.t : times[i];
      const std::size_t N = cfg.kind == StudyKind::temporal ? cfg.N[i] : cfg.N.front();
      const auto h = setup.run(scheme, N, t, cfg.corrected);
      errs[i] = setup.error(h.final(), t);
    });
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    ReportRow row;
    row.label = fmt_label(cfg.kind, xs[i]);
    row.x = xs[i];
    row.error_l2 = errs[i].first / norm;
    row.error_h1 = errs[i].second / norm;
    rep.rows.push_back(row);
  }
  fill_rates(rep);
  return rep;
}

}  // namespace

std::string_view study_name(StudyKind k) noexcept {
  switch (k) {
    case StudyKind::temporal: return "temporal";
    case StudyKind::spatial: return "spatial";
    case StudyKind::decay: return "decay";
  }
  return "?";
}

std::string_view reference_name(ReferenceMode r) noexcept {
  switch (r) {
    case ReferenceMode::continuous_modal: return "continuous_modal";
    case ReferenceMode::discrete_modal: return "discrete_modal";
    case ReferenceMode::self_convergence: return "self_convergence";
  }
  return "?";
}

std::string_view discretization_name(Discretization d) noexcept {
  return d == Discretization::fem ? "fem" : "spectral";
}

StudyKind parse_study(std::string_view s) {
  const auto v = lower(s);
  if (v == "temporal") return StudyKind::temporal;
  if (v == "spatial") return StudyKind::spatial;
  if (v == "decay") return StudyKind::decay;
  throw ConfigError("unknown study kind '" + std::string(s) + "' (expected temporal, spatial, decay)");
}

ReferenceMode parse_reference(std::string_view s) {
  const auto v = lower(s);
  if (v == "continuous_modal" || v == "continuous") return ReferenceMode::continuous_modal;
  if (v == "discrete_modal" || v == "discrete") return ReferenceMode::discrete_modal;
  if (v == "self_convergence" || v == "self") return ReferenceMode::self_convergence;
  throw ConfigError("unknown reference mode '" + std::string(s) +
                    "' (expected continuous_modal, discrete_modal, self_convergence)");
}

Discretization parse_discretization(std::string_view s) {
  const auto v = lower(s);
  if (v == "fem") return Discretization::fem;
  if (v == "spectral") return Discretization::spectral;
  throw ConfigError("unknown discretization '" + std::string(s) + "' (expected fem, spectral)");
}

StudyConfig default_config(StudyKind kind) {
  StudyConfig c;
  c.kind = kind;
  if (kind == StudyKind::spatial) {
    c.M = {8, 16, 32, 64};
    c.N = {1000};
    c.schemes = {"sbd"};
    c.reference = ReferenceMode::continuous_modal;
    c.case_id = 'e';
    c.alphas = {1.5};
  } else if (kind == StudyKind::decay) {
    c.N = {10};
    c.t = 1e-3;
    c.discretization = Discretization::spectral;
    c.k_max = 1023;
  }
  return c;
}

void validate(const StudyConfig& cfg) {
  if (cfg.alphas.empty()) throw ConfigError("at least one alpha is required");
  if (cfg.schemes.empty()) throw ConfigError("at least one scheme is required");
  if (cfg.M.empty() || cfg.N.empty()) throw ConfigError("M and N lists must not be empty");
  for (int m : cfg.M)
    if (m < 2 || m % 2) throw ConfigError("mesh divisions must be even and positive");
  for (auto n : cfg.N)
    if (n < 1) throw ConfigError("step counts must be positive");
  if (!(cfg.t > 0.0)) throw ConfigError("evaluation time must be positive");
  if (cfg.k_max < 1) throw ConfigError("k_max must be at least 1");
  if (cfg.format != "csv" && cfg.format != "markdown") throw ConfigError("format must be csv or markdown");
  switch (cfg.kind) {
    case StudyKind::temporal:
      if (cfg.N.size() < 2) throw ConfigError("a temporal study needs at least two step counts");
      break;
    case StudyKind::spatial:
      if (cfg.reference != ReferenceMode::continuous_modal)
        throw ConfigError("spatial studies require the continuous_modal reference");
      if (cfg.discretization != Discretization::fem) throw ConfigError("spatial studies need the fem discretization");
      if (cfg.M.size() < 2) throw ConfigError("a spatial study needs at least two meshes");
      break;
    case StudyKind::decay:
      if (cfg.reference == ReferenceMode::continuous_modal && cfg.discretization == Discretization::fem)
        throw ConfigError("decay studies require the discrete_modal or self_convergence reference");
      if (cfg.decades < 2) throw ConfigError("a decay study needs at least two decades");
      break;
  }
  if (cfg.discretization == Discretization::fem && cfg.reference == ReferenceMode::discrete_modal)
    for (int m : cfg.M)
      if (static_cast<std::size_t>(m - 1) * (m - 1) > reference::kDiscreteDofLimit)
        throw ConfigError("discrete_modal reference limited to " + std::to_string(reference::kDiscreteDofLimit) +
                          " interior dofs; use self_convergence on finer meshes");
  for (double a : cfg.alphas) {
    const auto c = reference::make_case(cfg.case_id, a);
    for (const auto& s : cfg.schemes) check_scheme(lower(s), c.equation);
  }
}

double theoretical_rate(const StudyConfig& cfg, double alpha, std::string_view scheme_in) {
  const auto scheme = lower(scheme_in);
  const auto c = reference::make_case(cfg.case_id, alpha);
  if (cfg.kind == StudyKind::spatial) return 2.0;
  if (cfg.kind == StudyKind::decay) {
    if (c.has_v) return c.q_regularity * alpha / 2.0;
    if (c.has_b) return 1.0 + c.q_regularity * alpha / 2.0;
    return kNaN;
  }
  if (scheme == "be") return 1.0;
  if (scheme == "sbd") {
    schemes::SchemeConfig sc;
    sc.equation = c.equation;
    sc.corrected = cfg.corrected;
    return (c.has_f && !sc.source_corrected()) ? kNaN : 2.0;
  }
  if (scheme == "cn") return 3.0 - alpha;
  return 2.0 - alpha;
}

void fill_rates(ConvergenceReport& r) {
  const bool decay = r.kind == StudyKind::decay;
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    auto& row = r.rows[i];
    if (i == 0) {
      row.rate = row.rate_h1 = kNaN;
      continue;
    }
    const auto& prev = r.rows[i - 1];
    const double lx = decay ? std::log(prev.x / row.x) : std::log(row.x / prev.x);
    row.rate = std::log(prev.error_l2 / row.error_l2) / lx;
    row.rate_h1 = std::log(prev.error_h1 / row.error_h1) / lx;
  }
  const std::size_t n = r.rows.size();
  if (n >= 3) {
    r.summary_rate = 0.5 * (r.rows[n - 1].rate + r.rows[n - 2].rate);
    r.summary_rate_h1 = 0.5 * (r.rows[n - 1].rate_h1 + r.rows[n - 2].rate_h1);
  } else if (n == 2) {
    r.summary_rate = r.rows[1].rate;
    r.summary_rate_h1 = r.rows[1].rate_h1;
  } else {
    r.summary_rate = r.summary_rate_h1 = kNaN;
  }
}

schemes::SolutionHistory run_scheme(const SpatialSystem& sys, const DiscreteData& data, const reference::CaseSpec& c,
                                    std::string_view scheme_in, std::optional<bool> corrected,
                                    const schemes::TimeGrid& grid) {
  const auto scheme = lower(scheme_in);
  if (is_cq_scheme(scheme)) {
    schemes::SchemeConfig sc;
    sc.stepper = cq::parse_rule(scheme);
    sc.equation = c.equation;
    sc.corrected = corrected;
    return schemes::solve(sys, data, c, sc, grid);
  }
  return baselines::solve_baseline(sys, data, c, baselines::parse_baseline(scheme), grid);
}

PointResult solve_point(const StudyConfig& cfg, double alpha, std::string_view scheme, int M, std::size_t N) {
  Setup setup(cfg, alpha, M);
  setup.prepare(cfg.t);
  const auto h = setup.run(scheme, N, cfg.t, cfg.corrected);
  const auto [l2, h1] = setup.error(h.final(), cfg.t);
  const auto& c = setup.case_spec();
  const double norm = c.has_v ? c.v_norm : 1.0;
  PointResult r;
  r.final = h.final();
  r.error_l2 = l2 / norm;
  r.error_h1 = h1 / norm;
  r.normalized = c.has_v;
  r.n_dofs = setup.n_dofs();
  for (const auto& s : h.solve_stats) r.cg_iterations += s.iterations;
  r.tail_bound = setup.tail_bound();
  return r;
}

std::vector<ConvergenceReport> run_study(const StudyConfig& cfg) {
  validate(cfg);
  std::vector<ConvergenceReport> out;
  for (double a : cfg.alphas)
    for (const auto& s : cfg.schemes) out.push_back(run_one(cfg, a, lower(s)));
  return out;
}

unsigned thread_count() {
  if (const char* env = std::getenv("FRACSTEP_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace fracstep::harness
