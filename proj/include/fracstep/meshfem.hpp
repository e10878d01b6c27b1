#pragma once

// Uniform right-angled triangulation of the unit square and P1 finite
// elements on its interior nodes (homogeneous Dirichlet rows eliminated).

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "fracstep/numkit.hpp"

namespace fracstep::meshfem {

using numkit::Index;
using numkit::Vector;

inline constexpr Index kBoundary = -1;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct Mesh {
  int M = 0;
  double h = 0.0;
  std::vector<Point> nodes;                     // node (i,j) at index j*(M+1)+i
  std::vector<std::array<Index, 3>> triangles;  // counter-clockwise
  std::vector<Index> interior_map;              // node -> dof or kBoundary
  std::vector<Index> interior_nodes;            // dof -> node

  std::size_t n_interior() const noexcept { return interior_nodes.size(); }
  double triangle_area() const noexcept { return 0.5 * h * h; }
};

/// Each of the M x M squares is split by its (i,j)-(i+1,j+1) diagonal.
Mesh build_mesh(int M);

struct FemSystem {
  Mesh mesh;
  numkit::SparseMatrix mass;
  numkit::SparseMatrix stiffness;
  int quadrature_order = 4;
};

FemSystem assemble(const Mesh& mesh);

/// Point of the elementwise data quadrature; weight includes the triangle area.
struct QuadPoint {
  double x;
  double y;
  double weight;
  std::array<double, 3> bary;
  Index triangle;
};

/// 6-point rule exact for polynomials of degree 4, listed triangle by triangle.
std::vector<QuadPoint> quadrature_points(const Mesh& mesh);

using PointFn = std::function<double(double, double)>;
using GradFn = std::function<std::array<double, 2>(double, double)>;

/// (g, phi_i) for every interior dof.
Vector load_vector(const FemSystem& sys, const PointFn& g);
/// (grad g, grad phi_i) for every interior dof.
Vector gradient_load_vector(const FemSystem& sys, const GradFn& grad_g);

Vector l2_project(const FemSystem& sys, const PointFn& g, double rel_tol = 1e-13);
Vector ritz_project(const FemSystem& sys, const GradFn& grad_g, double rel_tol = 1e-13);
/// Nodal interpolant restricted to interior dofs.
Vector interpolate(const Mesh& mesh, const PointFn& g);

double l2_norm(const FemSystem& sys, std::span<const double> c);
double h1_seminorm(const FemSystem& sys, std::span<const double> c);

struct ErrorNorms {
  double l2 = 0.0;
  double h1 = 0.0;  // seminorm
};

/// Exact field sampled at quadrature_points(mesh), in the same order.
struct SampledField {
  std::vector<double> value;
  std::vector<double> dx;
  std::vector<double> dy;
};

ErrorNorms error_norms(const FemSystem& sys, std::span<const double> c, const SampledField& exact);
ErrorNorms error_norms(const FemSystem& sys, std::span<const double> c, const PointFn& u, const GradFn& grad_u);

}  // namespace fracstep::meshfem
