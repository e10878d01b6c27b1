#pragma once

// Spatial operator pair (Mass, Stiff) seen by the time steppers. The finite
// element realization wraps a FemSystem; the sine-spectral one is diagonal.

#include <cstddef>
#include <map>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

#include "fracstep/meshfem.hpp"
#include "fracstep/numkit.hpp"

namespace fracstep {

using numkit::Vector;

struct StepSolveStats {
  std::size_t iterations = 0;
  double relative_residual = 0.0;
};

class SpatialSystem {
 public:
  virtual ~SpatialSystem() = default;

  virtual std::size_t n_dofs() const = 0;
  virtual void apply_mass(std::span<const double> x, std::span<double> y) const = 0;
  virtual void apply_stiffness(std::span<const double> x, std::span<double> y) const = 0;
  /// Solves (a Mass + b Stiff) x = rhs for a, b >= 0 not both zero; x holds a
  /// warm start on entry.
  virtual StepSolveStats solve_shifted(double a, double b, std::span<const double> rhs, std::span<double> x) const = 0;

  /// sqrt(x^T Mass x)
  double mass_norm(std::span<const double> x) const;
};

class FemOperator final : public SpatialSystem {
 public:
  explicit FemOperator(const meshfem::FemSystem& sys, double cg_rel_tol = 1e-12) : sys_(sys), cg_rel_tol_(cg_rel_tol) {}

  std::size_t n_dofs() const override { return sys_.mesh.n_interior(); }
  void apply_mass(std::span<const double> x, std::span<double> y) const override { sys_.mass.multiply(x, y); }
  void apply_stiffness(std::span<const double> x, std::span<double> y) const override {
    sys_.stiffness.multiply(x, y);
  }
  StepSolveStats solve_shifted(double a, double b, std::span<const double> rhs, std::span<double> x) const override;

  const meshfem::FemSystem& fem() const noexcept { return sys_; }

 private:
  const numkit::SparseMatrix& shifted(double a, double b) const;

  const meshfem::FemSystem& sys_;
  double cg_rel_tol_;
  mutable std::mutex mutex_;
  mutable std::map<std::pair<double, double>, numkit::SparseMatrix> shifted_;
};

/// Galerkin system in the orthonormal sine basis 2 sin(k pi x) sin(l pi y):
/// Mass = I, Stiff = diag(pi^2 (k^2 + l^2)).
class ModalSystem final : public SpatialSystem {
 public:
  explicit ModalSystem(std::vector<double> eigenvalues) : lambda_(std::move(eigenvalues)) {}

  std::size_t n_dofs() const override { return lambda_.size(); }
  void apply_mass(std::span<const double> x, std::span<double> y) const override;
  void apply_stiffness(std::span<const double> x, std::span<double> y) const override;
  StepSolveStats solve_shifted(double a, double b, std::span<const double> rhs, std::span<double> x) const override;

  std::span<const double> eigenvalues() const noexcept { return lambda_; }

 private:
  std::vector<double> lambda_;
};

/// Discretized problem data: initial values v, b and the load vector
/// (f_space, phi_i) of the spatial source factor, in the system's dofs.
struct DiscreteData {
  Vector v;
  Vector b;
  Vector f_load;
  Vector mass_v;  // Mass v
  Vector mass_b;  // Mass b
};

}  // namespace fracstep
