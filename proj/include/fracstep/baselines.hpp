#pragma once

// Comparison time steppers for the Caputo derivative: the L1 formula, the two
// fractional-integral schemes with trapezoidal / Newton-Gregory weights
// (Zeng I / Zeng II) and the half-step Crank-Nicolson scheme for 1 < alpha < 2.

#include <string_view>
#include <vector>

#include "fracstep/schemes.hpp"

namespace fracstep::baselines {

enum class BaselineKind { L1, ZengI, ZengII, CrankNicolson };

std::string_view baseline_name(BaselineKind kind) noexcept;
/// "l1", "zeng1", "zeng2", "cn"; throws ConfigError otherwise.
BaselineKind parse_baseline(std::string_view name);
reference::Equation baseline_equation(BaselineKind kind) noexcept;

/// b_j = (j+1)^{1-alpha} - j^{1-alpha}, j = 0..n-1.
std::vector<double> l1_coefficients(double alpha, std::size_t n);
/// a_j = (j+1)^{2-alpha} - j^{2-alpha}, j = 0..n-1.
std::vector<double> cn_coefficients(double alpha, std::size_t n);
/// Right-hand-side weights l_0..l_n of the Zeng schemes (zero beyond the stencil).
std::vector<double> zeng_rhs_weights(BaselineKind kind, double alpha, std::size_t n);

schemes::SolutionHistory solve_baseline(const SpatialSystem& sys, const DiscreteData& data,
                                        const reference::CaseSpec& c, BaselineKind kind,
                                        const schemes::TimeGrid& grid);

schemes::SolutionHistory solve_baseline(const meshfem::FemSystem& sys, const reference::CaseSpec& c,
                                        BaselineKind kind, const schemes::TimeGrid& grid);

}  // namespace fracstep::baselines
