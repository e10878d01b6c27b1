#include "fracstep/system.hpp"

#include <algorithm>
#include <cmath>

namespace fracstep {

double SpatialSystem::mass_norm(std::span<const double> x) const {
  Vector mx(x.size());
  apply_mass(x, mx);
  return std::sqrt(std::max(0.0, kernels::dot(x, mx)));
}

const numkit::SparseMatrix& FemOperator::shifted(double a, double b) const {
  std::lock_guard lock(mutex_);
  auto it = shifted_.find({a, b});
  if (it == shifted_.end())
    it = shifted_.emplace(std::pair{a, b}, numkit::SparseMatrix::combine(a, sys_.mass, b, sys_.stiffness)).first;
  return it->second;
}

StepSolveStats FemOperator::solve_shifted(double a, double b, std::span<const double> rhs, std::span<double> x) const {
  const auto& m = shifted(a, b);
  auto r = numkit::cg_solve(m, rhs, {cg_rel_tol_, 0}, x);
  std::copy(r.x.begin(), r.x.end(), x.begin());
  return {r.iterations, r.relative_residual};
}

void ModalSystem::apply_mass(std::span<const double> x, std::span<double> y) const {
  std::copy(x.begin(), x.end(), y.begin());
}

void ModalSystem::apply_stiffness(std::span<const double> x, std::span<double> y) const {
  for (std::size_t i = 0; i < lambda_.size(); ++i) y[i] = lambda_[i] * x[i];
}

StepSolveStats ModalSystem::solve_shifted(double a, double b, std::span<const double> rhs, std::span<double> x) const {
  for (std::size_t i = 0; i < lambda_.size(); ++i) x[i] = rhs[i] / (a + b * lambda_[i]);
  return {0, 0.0};
}

}  // namespace fracstep
