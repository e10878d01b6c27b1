#pragma once

// Fully discrete Galerkin / convolution-quadrature time stepping for the
// subdiffusion (0 < alpha < 1) and diffusion-wave (1 < alpha < 2) problems.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fracstep/cq.hpp"
#include "fracstep/reference.hpp"
#include "fracstep/system.hpp"

namespace fracstep::schemes {

using reference::CaseSpec;
using reference::Equation;
using reference::Projection;

struct TimeGrid {
  double T = 0.1;
  std::size_t N = 10;

  double tau() const noexcept { return T / static_cast<double>(N); }
  double t(std::size_t n) const noexcept { return T * static_cast<double>(n) / static_cast<double>(N); }
};

/// Throws ConfigError unless T > 0 and N >= 1.
TimeGrid make_grid(double T, std::size_t N);

struct SchemeConfig {
  cq::RuleKind stepper = cq::RuleKind::BE;
  Equation equation = Equation::subdiffusion;
  /// Source enters through the order-1 difference of its antiderivative instead
  /// of pointwise samples. Unset means on for diffusion-wave, off for subdiffusion.
  std::optional<bool> corrected;
  Projection initial_projection = Projection::L2;

  bool source_corrected() const noexcept { return corrected.value_or(equation == Equation::diffusion_wave); }
};

/// Label of the displayed scheme variant, e.g. "SBD corrected diffusion-wave".
std::string scheme_label(const SchemeConfig& cfg);

struct SolutionHistory {
  std::vector<Vector> U;  // U^0 .. U^N
  TimeGrid grid;
  std::vector<StepSolveStats> solve_stats;  // steps 1..N

  const Vector& final() const { return U.back(); }
};

/// Checks the order range for the equation; throws ConfigError.
void check_order(Equation equation, double alpha);

SolutionHistory solve(const SpatialSystem& sys, const DiscreteData& data, const CaseSpec& c, const SchemeConfig& cfg,
                      const TimeGrid& grid);

/// Finite element convenience path: projects the case data and runs solve().
SolutionHistory solve(const meshfem::FemSystem& sys, const CaseSpec& c, const SchemeConfig& cfg, const TimeGrid& grid);

}  // namespace fracstep::schemes
