#pragma once

// Convergence studies: temporal (N refinement), spatial (M refinement) and
// small-time decay, with rate estimation and CSV / markdown tables.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fracstep/reference.hpp"
#include "fracstep/schemes.hpp"

namespace fracstep::harness {

enum class StudyKind { temporal, spatial, decay };
enum class ReferenceMode { continuous_modal, discrete_modal, self_convergence };
/// Spatial realization: P1 finite elements, or Galerkin in the sine modes
/// 1 <= k, l <= k_max (stiff spectrum at no cost; the exact modal solution is
/// then also the semidiscrete one).
enum class Discretization { fem, spectral };

std::string_view study_name(StudyKind k) noexcept;
std::string_view reference_name(ReferenceMode r) noexcept;
std::string_view discretization_name(Discretization d) noexcept;
StudyKind parse_study(std::string_view s);
ReferenceMode parse_reference(std::string_view s);
Discretization parse_discretization(std::string_view s);

struct StudyConfig {
  char case_id = 'a';
  std::vector<double> alphas{0.5};
  std::vector<std::string> schemes{"be"};  // be, sbd, l1, zeng1, zeng2, cn
  StudyKind kind = StudyKind::temporal;
  std::vector<int> M{16};
  std::vector<std::size_t> N{10, 20, 40, 80, 160, 320};
  double t = 0.1;      // evaluation time; first time of a decay study
  int decades = 6;     // decay: t, t/10, ...
  ReferenceMode reference = ReferenceMode::discrete_modal;
  Discretization discretization = Discretization::fem;
  std::optional<bool> corrected;
  reference::Projection projection = reference::Projection::L2;
  int k_max = 255;
  std::size_t self_convergence_factor = 8;  // reference steps = factor * max(N)
  std::string out;
  std::string format = "csv";
};

/// Defaults per study kind. temporal: FEM M=16, N=10..320, discrete reference;
/// spatial: M=8..64, SBD N=1000, continuous reference; decay: spectral with
/// k_max=1023, N=10, t=1e-3 over six decades.
StudyConfig default_config(StudyKind kind);

/// Throws ConfigError on an inconsistent configuration.
void validate(const StudyConfig& cfg);

/// Starts from default_config of the "study" key and overrides keys case,
/// alpha, scheme, M, N, t, decades, reference, discretization, corrected,
/// projection, k_max, self_convergence_factor, out, format.
StudyConfig load_config_json(const std::string& text);
StudyConfig load_config_file(const std::string& path);

struct ReportRow {
  std::string label;
  double x = 0.0;  // N, M or t
  double error_l2 = 0.0;
  double error_h1 = 0.0;
  double rate = 0.0;  // NaN in the first row
  double rate_h1 = 0.0;
};

struct ConvergenceReport {
  std::vector<ReportRow> rows;
  double summary_rate = 0.0;     // L2, mean of the last two stepwise rates
  double summary_rate_h1 = 0.0;
  double theoretical_rate = 0.0;  // NaN when no prediction applies
  char case_id = 'a';
  double alpha = 0.5;
  std::string scheme;
  StudyKind kind = StudyKind::temporal;
  ReferenceMode reference = ReferenceMode::discrete_modal;
  Discretization discretization = Discretization::fem;
  bool normalized = true;  // errors divided by ||v||; raw when v = 0
};

/// Stepwise rates log(e_k / e_{k+1}) / log(x_{k+1} / x_k) (refinement) or
/// log(e_k / e_{k+1}) / log(x_k / x_{k+1}) (decay, x = t), then the summary.
void fill_rates(ConvergenceReport& r);

/// Runs "be"/"sbd" through schemes::solve and the rest through solve_baseline.
schemes::SolutionHistory run_scheme(const SpatialSystem& sys, const DiscreteData& data, const reference::CaseSpec& c,
                                    std::string_view scheme, std::optional<bool> corrected,
                                    const schemes::TimeGrid& grid);

struct PointResult {
  Vector final;            // U^N in the discretization's coefficients
  double error_l2 = 0.0;
  double error_h1 = 0.0;
  bool normalized = true;
  std::size_t n_dofs = 0;
  std::size_t cg_iterations = 0;  // summed over steps
  double tail_bound = 0.0;        // continuous reference only
};

/// One solve at (alpha, scheme, M, N) up to cfg.t, measured against cfg.reference.
PointResult solve_point(const StudyConfig& cfg, double alpha, std::string_view scheme, int M, std::size_t N);

/// One report per (alpha, scheme) in config order.
std::vector<ConvergenceReport> run_study(const StudyConfig& cfg);

/// Expected rate from the theory for the configured point.
double theoretical_rate(const StudyConfig& cfg, double alpha, std::string_view scheme);

std::string emit_csv(const ConvergenceReport& r);
/// Parses emit_csv output back into rows.
std::vector<ReportRow> parse_csv(const std::string& text);
/// One table, one line per report: errors per grid point then "rate (theory)".
std::string emit_markdown(const std::vector<ConvergenceReport>& reports);

/// Worker count: FRACSTEP_THREADS when set and positive, else hardware threads.
unsigned thread_count();

/// Runs task(i) for i < n on up to thread_count() threads.
template <class F>
void parallel_for(std::size_t n, F&& task);

}  // namespace fracstep::harness

#include "fracstep/detail/parallel.hpp"
