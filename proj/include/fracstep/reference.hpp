#pragma once

// Benchmark cases (a)-(g) on the unit square and their reference solutions:
// the Dirichlet sine series of the exact solution, and the semidiscrete
// solution expanded in discrete eigenpairs (exact in time).

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "fracstep/meshfem.hpp"
#include "fracstep/numkit.hpp"
#include "fracstep/system.hpp"

namespace fracstep::reference {

enum class Equation { subdiffusion, diffusion_wave };
enum class Projection { L2, Ritz };

using TimeFn = std::function<double(double)>;
using ModalFn = std::function<double(int, int)>;

struct CaseSpec {
  char id = 'a';
  double alpha = 0.5;
  Equation equation = Equation::subdiffusion;

  // f(x,t) = f_time(t) f_space(x); F_time is the exact antiderivative with F_time(0) = 0.
  meshfem::PointFn v, b, f_space;
  meshfem::GradFn grad_v;
  TimeFn f_time, F_time;
  bool has_v = false, has_b = false, has_f = false;

  // Coefficients against 2 sin(k pi x) sin(l pi y).
  ModalFn vhat, bhat, fhat;
  double v_norm = 0.0, b_norm = 0.0, f_space_norm = 0.0;  // L2 norms, closed form
  double q_regularity = 2.0;                              // v (or b) lies in H^q
};

/// Throws ConfigError for an unknown id or an order outside its equation's range.
CaseSpec make_case(char id, double alpha);

/// Gamma(1.2) t^{alpha+0.2} etc: the Duhamel response of one mode to (1 + t^0.2).
double duhamel_mode(double alpha, double lambda, double t);

enum class ExpansionKind { continuous, discrete };

struct ModalExpansion {
  ExpansionKind kind = ExpansionKind::continuous;
  std::vector<double> lambda;
  std::vector<double> v_coef, b_coef, f_coef;
  std::vector<int> k, l;                               // continuous modes
  std::shared_ptr<const numkit::EigenBasis> basis;     // discrete modes
  double tail_bound = 0.0;                             // L2 norm of the omitted data

  std::size_t size() const noexcept { return lambda.size(); }
};

/// Continuous sine modes with 1 <= k, l <= k_max carrying a nonzero coefficient.
ModalExpansion modal_coefficients(const CaseSpec& c, int k_max);

/// Modal amplitudes of the exact solution at time t.
std::vector<double> modal_amplitudes(const ModalExpansion& e, const CaseSpec& c, double t);

/// Exact field and gradient at the quadrature points of `mesh` from continuous amplitudes.
meshfem::SampledField sample_modal_field(const ModalExpansion& e, std::span<const double> amplitudes,
                                         const meshfem::Mesh& mesh);
/// Pointwise value of a continuous expansion.
double evaluate_modal(const ModalExpansion& e, std::span<const double> amplitudes, double x, double y);

/// L2 and H1-seminorm of a continuous expansion with the given amplitudes.
double modal_l2_norm(std::span<const double> amplitudes);
double modal_h1_seminorm(const ModalExpansion& e, std::span<const double> amplitudes);

inline constexpr std::size_t kDiscreteDofLimit = 4000;

/// Projects the case data onto the finite element space.
DiscreteData discretize(const meshfem::FemSystem& sys, const CaseSpec& c, Projection projection = Projection::L2);
/// Sine-mode data for a ModalSystem built from the same expansion.
DiscreteData discretize(const ModalExpansion& e);
ModalSystem modal_system(const ModalExpansion& e);

/// Discrete eigenpairs of (Stiff, Mass) and data coefficients phi_j^T Mass v_h etc.
/// A precomputed basis for the same system may be passed in.
ModalExpansion discrete_expansion(const meshfem::FemSystem& sys, const DiscreteData& data,
                                  std::shared_ptr<const numkit::EigenBasis> basis = nullptr);
/// Dense generalized eigensolve of (Stiff, Mass); enforces kDiscreteDofLimit.
std::shared_ptr<const numkit::EigenBasis> discrete_basis(const meshfem::FemSystem& sys);

/// u_h(t) in finite element coefficients.
Vector discrete_reference(const meshfem::FemSystem& sys, const CaseSpec& c, double t,
                          Projection projection = Projection::L2);
Vector synthesize(const ModalExpansion& discrete, std::span<const double> amplitudes);

/// Coefficients phi_j^T Mass x of a finite element vector in a discrete expansion.
std::vector<double> analyze(const meshfem::FemSystem& sys, const ModalExpansion& discrete, std::span<const double> x);

}  // namespace fracstep::reference
