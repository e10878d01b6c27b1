// fracstep command line: solve, study, weights, mlf, mesh-info.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fracstep/cq.hpp"
#include "fracstep/errors.hpp"
#include "fracstep/harness.hpp"
#include "fracstep/mlf.hpp"

namespace {

using namespace fracstep;

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << text;
}

std::optional<bool> parse_flag(const std::string& s) {
  if (s.empty()) return std::nullopt;
  if (s == "true" || s == "1" || s == "on" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "off" || s == "no") return false;
  throw ConfigError("--corrected expects true or false");
}

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct CommonFlags {
  std::string case_id, reference, discretization, corrected, out, format;
  std::vector<double> alpha;
  std::vector<std::string> scheme;
  std::vector<int> M;
  std::vector<std::size_t> N;
  std::optional<double> t;
  std::optional<int> k_max;

  void add(CLI::App* app) {
    app->add_option("--case", case_id, "Benchmark case a-g");
    app->add_option("--alpha", alpha, "Fractional order(s)");
    app->add_option("--scheme", scheme, "be, sbd, l1, zeng1, zeng2, cn");
    app->add_option("--M", M, "Mesh divisions per side (even)");
    app->add_option("--N", N, "Time step count(s)");
    app->add_option("--t", t, "Evaluation time (first time of a decay study)");
    app->add_option("--reference", reference, "continuous_modal, discrete_modal, self_convergence");
    app->add_option("--discretization", discretization, "fem or spectral");
    app->add_option("--k-max", k_max, "Sine modes per direction");
    app->add_option("--corrected", corrected, "Source correction: true/false (default per equation)");
    app->add_option("--out", out, "Output file (stdout when omitted)");
    app->add_option("--format", format, "csv or markdown");
  }

  void apply(harness::StudyConfig& c) const {
    if (!case_id.empty()) {
      if (case_id.size() != 1) throw ConfigError("--case expects a single letter a-g");
      c.case_id = case_id[0];
    }
    if (!alpha.empty()) c.alphas = alpha;
    if (!scheme.empty()) c.schemes = scheme;
    if (!M.empty()) c.M = M;
    if (!N.empty()) c.N = N;
    if (t) c.t = *t;
    if (k_max) c.k_max = *k_max;
    if (!reference.empty()) c.reference = harness::parse_reference(reference);
    if (!discretization.empty()) c.discretization = harness::parse_discretization(discretization);
    if (auto f = parse_flag(corrected)) c.corrected = f;
    if (!out.empty()) c.out = out;
    if (!format.empty()) c.format = format;
  }
};

int run_solve(const CommonFlags& flags) {
  auto cfg = harness::default_config(harness::StudyKind::temporal);
  cfg.N = {10};
  flags.apply(cfg);
  const double alpha = cfg.alphas.front();
  const auto& scheme = cfg.schemes.front();
  const int M = cfg.M.front();
  const std::size_t N = cfg.N.front();
  const auto r = harness::solve_point(cfg, alpha, scheme, M, N);

  std::cerr << "case=" << cfg.case_id << " alpha=" << alpha << " scheme=" << scheme << " M=" << M << " N=" << N
            << " t=" << cfg.t << " reference=" << harness::reference_name(cfg.reference)
            << " dofs=" << r.n_dofs << " cg_iterations=" << r.cg_iterations << "\n"
            << "error_l2=" << g17(r.error_l2) << " error_h1=" << g17(r.error_h1)
            << (r.normalized ? " (normalized by ||v||)" : " (raw, v = 0)") << "\n";

  std::string text = "dof,value\n";
  if (cfg.discretization == harness::Discretization::fem) {
    const auto mesh = meshfem::build_mesh(M);
    text = "x,y,value\n";
    for (std::size_t i = 0; i < r.final.size(); ++i) {
      const auto& p = mesh.nodes[mesh.interior_nodes[i]];
      text += g17(p.x) + "," + g17(p.y) + "," + g17(r.final[i]) + "\n";
    }
  } else {
    for (std::size_t i = 0; i < r.final.size(); ++i) text += std::to_string(i) + "," + g17(r.final[i]) + "\n";
  }
  if (!cfg.out.empty()) write_text(cfg.out, text);
  return 0;
}

int run_study(const CommonFlags& flags, const std::string& config_path, const std::string& kind) {
  harness::StudyConfig cfg;
  if (!config_path.empty()) {
    cfg = harness::load_config_file(config_path);
    if (!kind.empty()) cfg.kind = harness::parse_study(kind);
  } else {
    cfg = harness::default_config(kind.empty() ? harness::StudyKind::temporal : harness::parse_study(kind));
  }
  flags.apply(cfg);
  const auto reports = harness::run_study(cfg);
  for (const auto& r : reports) {
    std::fprintf(stderr, "case=%c alpha=%g scheme=%s study=%s reference=%s summary_rate=%.4f theory=%.4f%s\n",
                 r.case_id, r.alpha, r.scheme.c_str(), std::string(harness::study_name(r.kind)).c_str(),
                 std::string(harness::reference_name(r.reference)).c_str(), r.summary_rate, r.theoretical_rate,
                 r.normalized ? "" : " raw-error");
  }
  if (cfg.format == "markdown") {
    write_text(cfg.out, harness::emit_markdown(reports));
    return 0;
  }
  if (reports.size() == 1 || cfg.out.empty()) {
    std::string all;
    for (const auto& r : reports) all += harness::emit_csv(r);
    write_text(cfg.out, all);
    return 0;
  }
  const std::filesystem::path base(cfg.out);
  for (const auto& r : reports) {
    char suffix[64];
    std::snprintf(suffix, sizeof suffix, "_%s_a%g", r.scheme.c_str(), r.alpha);
    auto p = base.parent_path() / (base.stem().string() + suffix + base.extension().string());
    write_text(p.string(), harness::emit_csv(r));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractional subdiffusion / diffusion-wave solver and convergence studies"};
  app.require_subcommand(1);

  CommonFlags solve_flags, study_flags;
  auto* solve = app.add_subcommand("solve", "One solve; prints error metrics, writes the final state with --out");
  solve_flags.add(solve);

  std::string config_path, kind;
  auto* study = app.add_subcommand("study", "Convergence study (temporal, spatial, decay)");
  study->add_option("--config", config_path, "JSON config; flags override its keys");
  study->add_option("--kind", kind, "temporal, spatial or decay");
  study_flags.add(study);

  std::string rule = "be", method = "recurrence", weights_out;
  double w_alpha = 0.5, tau = 1.0;
  std::size_t w_n = 10;
  auto* weights = app.add_subcommand("weights", "Dump convolution quadrature weights as CSV");
  weights->add_option("--rule", rule, "be or sbd");
  weights->add_option("--alpha", w_alpha, "Order");
  weights->add_option("--tau", tau, "Step size");
  weights->add_option("--N", w_n, "Highest weight index");
  weights->add_option("--method", method, "recurrence or fft");
  weights->add_option("--out", weights_out, "Output file");

  double m_alpha = 0.5, beta = 1.0, x_max = 10.0;
  std::size_t points = 11;
  std::vector<double> xs;
  std::string mlf_out;
  auto* mlf = app.add_subcommand("mlf", "Tabulate E_{alpha,beta}(-x) as CSV");
  mlf->add_option("--alpha", m_alpha, "alpha in (0, 2]");
  mlf->add_option("--beta", beta, "beta > 0");
  mlf->add_option("--x", xs, "Arguments x >= 0 (evaluates at -x)");
  mlf->add_option("--x-max", x_max, "Upper end of a uniform grid");
  mlf->add_option("--points", points, "Grid points");
  mlf->add_option("--out", mlf_out, "Output file");

  int mesh_m = 4;
  auto* mesh = app.add_subcommand("mesh-info", "Node, triangle and dof counts");
  mesh->add_option("--M", mesh_m, "Mesh divisions per side (even)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*solve) return run_solve(solve_flags);
    if (*study) return run_study(study_flags, config_path, kind);
    if (*weights) {
      const auto r = cq::CqRule::of(cq::parse_rule(rule));
      if (!(tau > 0.0)) throw ConfigError("--tau must be positive");
      cq::CqWeights w;
      if (method == "recurrence") w = cq::cq_weights(r, w_alpha, tau, w_n);
      else if (method == "fft") w = cq::cq_weights_fft(r, w_alpha, tau, w_n);
      else throw ConfigError("--method must be recurrence or fft");
      std::string text = "j,omega\n";
      for (std::size_t j = 0; j <= w.N(); ++j) text += std::to_string(j) + "," + g17(w[j]) + "\n";
      write_text(weights_out, text);
      return 0;
    }
    if (*mlf) {
      if (xs.empty()) {
        if (points < 1) throw ConfigError("--points must be positive");
        for (std::size_t i = 0; i < points; ++i)
          xs.push_back(points == 1 ? 0.0 : x_max * static_cast<double>(i) / static_cast<double>(points - 1));
      }
      std::string text = "x,value,regime\n";
      const mlf::MlfParams p{m_alpha, beta};
      for (double x : xs) {
        if (x < 0.0) throw ConfigError("--x values must be nonnegative (E is evaluated at -x)");
        text += g17(x) + "," + g17(mlf::mlf(p, -x)) + "," + std::string(mlf::regime_name(mlf::select_regime(p, -x))) +
                "\n";
      }
      write_text(mlf_out, text);
      return 0;
    }
    if (*mesh) {
      const auto m = meshfem::build_mesh(mesh_m);
      std::printf("M=%d h=%.17g nodes=%zu triangles=%zu interior_dofs=%zu\n", m.M, m.h, m.nodes.size(),
                  m.triangles.size(), m.n_interior());
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << " (achieved " << e.achieved() << ")\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
