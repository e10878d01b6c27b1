#include <algorithm>
#include <cmath>

#include "fracstep/meshfem.hpp"

namespace fracstep::meshfem {

namespace {

struct ElementGeometry {
  double area;
  std::array<std::array<double, 2>, 3> grad;  // gradients of the barycentric coordinates
};

ElementGeometry geometry(const Mesh& mesh, const std::array<Index, 3>& tri) {
  const Point& p0 = mesh.nodes[static_cast<std::size_t>(tri[0])];
  const Point& p1 = mesh.nodes[static_cast<std::size_t>(tri[1])];
  const Point& p2 = mesh.nodes[static_cast<std::size_t>(tri[2])];
  const double det = (p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y);
  ElementGeometry g;
  g.area = 0.5 * det;
  g.grad[0] = {(p1.y - p2.y) / det, (p2.x - p1.x) / det};
  g.grad[1] = {(p2.y - p0.y) / det, (p0.x - p2.x) / det};
  g.grad[2] = {(p0.y - p1.y) / det, (p1.x - p0.x) / det};
  return g;
}

// Degree-4 symmetric rule: two orbits of three points each.
constexpr double kA1 = 0.44594849091596488632;
constexpr double kA2 = 0.091576213509770743460;
constexpr double kW1 = 0.22338158967801146570;
constexpr double kW2 = 0.10995174365532186764;

constexpr std::array<std::array<double, 3>, 6> kBary = {{
    {1.0 - 2.0 * kA1, kA1, kA1},
    {kA1, 1.0 - 2.0 * kA1, kA1},
    {kA1, kA1, 1.0 - 2.0 * kA1},
    {1.0 - 2.0 * kA2, kA2, kA2},
    {kA2, 1.0 - 2.0 * kA2, kA2},
    {kA2, kA2, 1.0 - 2.0 * kA2},
}};
constexpr std::array<double, 6> kWeights = {kW1, kW1, kW1, kW2, kW2, kW2};

}  // namespace

FemSystem assemble(const Mesh& mesh) {
  std::vector<numkit::Triplet> mass_t, stiff_t;
  mass_t.reserve(9 * mesh.triangles.size());
  stiff_t.reserve(9 * mesh.triangles.size());
  for (const auto& tri : mesh.triangles) {
    const ElementGeometry g = geometry(mesh, tri);
    for (int a = 0; a < 3; ++a) {
      const Index ra = mesh.interior_map[static_cast<std::size_t>(tri[a])];
      if (ra == kBoundary) continue;
      for (int b = 0; b < 3; ++b) {
        const Index rb = mesh.interior_map[static_cast<std::size_t>(tri[b])];
        if (rb == kBoundary) continue;
        const double m = g.area / 12.0 * (a == b ? 2.0 : 1.0);
        const double s = g.area * (g.grad[a][0] * g.grad[b][0] + g.grad[a][1] * g.grad[b][1]);
        mass_t.push_back({ra, rb, m});
        stiff_t.push_back({ra, rb, s});
      }
    }
  }
  FemSystem sys;
  sys.mesh = mesh;
  const std::size_t n = mesh.n_interior();
  sys.mass = numkit::SparseMatrix::from_triplets(n, n, std::move(mass_t));
  sys.stiffness = numkit::SparseMatrix::from_triplets(n, n, std::move(stiff_t));
  return sys;
}

std::vector<QuadPoint> quadrature_points(const Mesh& mesh) {
  std::vector<QuadPoint> pts;
  pts.reserve(6 * mesh.triangles.size());
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    const double area = mesh.triangle_area();
    const Point& p0 = mesh.nodes[static_cast<std::size_t>(tri[0])];
    const Point& p1 = mesh.nodes[static_cast<std::size_t>(tri[1])];
    const Point& p2 = mesh.nodes[static_cast<std::size_t>(tri[2])];
    for (std::size_t q = 0; q < kBary.size(); ++q) {
      const auto& l = kBary[q];
      pts.push_back({l[0] * p0.x + l[1] * p1.x + l[2] * p2.x, l[0] * p0.y + l[1] * p1.y + l[2] * p2.y,
                     kWeights[q] * area, l, static_cast<Index>(t)});
    }
  }
  return pts;
}

Vector load_vector(const FemSystem& sys, const PointFn& g) {
  const Mesh& mesh = sys.mesh;
  Vector load(mesh.n_interior(), 0.0);
  for (const QuadPoint& qp : quadrature_points(mesh)) {
    const double gv = g(qp.x, qp.y) * qp.weight;
    if (gv == 0.0) continue;
    const auto& tri = mesh.triangles[static_cast<std::size_t>(qp.triangle)];
    for (int a = 0; a < 3; ++a) {
      const Index r = mesh.interior_map[static_cast<std::size_t>(tri[a])];
      if (r != kBoundary) load[static_cast<std::size_t>(r)] += gv * qp.bary[a];
    }
  }
  return load;
}

Vector gradient_load_vector(const FemSystem& sys, const GradFn& grad_g) {
  const Mesh& mesh = sys.mesh;
  Vector load(mesh.n_interior(), 0.0);
  for (const QuadPoint& qp : quadrature_points(mesh)) {
    const auto& tri = mesh.triangles[static_cast<std::size_t>(qp.triangle)];
    const ElementGeometry geo = geometry(mesh, tri);
    const auto gg = grad_g(qp.x, qp.y);
    for (int a = 0; a < 3; ++a) {
      const Index r = mesh.interior_map[static_cast<std::size_t>(tri[a])];
      if (r != kBoundary)
        load[static_cast<std::size_t>(r)] += qp.weight * (gg[0] * geo.grad[a][0] + gg[1] * geo.grad[a][1]);
    }
  }
  return load;
}

Vector l2_project(const FemSystem& sys, const PointFn& g, double rel_tol) {
  const Vector load = load_vector(sys, g);
  return numkit::cg_solve(sys.mass, load, {rel_tol, 0}).x;
}

Vector ritz_project(const FemSystem& sys, const GradFn& grad_g, double rel_tol) {
  const Vector load = gradient_load_vector(sys, grad_g);
  return numkit::cg_solve(sys.stiffness, load, {rel_tol, 0}).x;
}

Vector interpolate(const Mesh& mesh, const PointFn& g) {
  Vector c(mesh.n_interior());
  for (std::size_t d = 0; d < c.size(); ++d) {
    const Point& p = mesh.nodes[static_cast<std::size_t>(mesh.interior_nodes[d])];
    c[d] = g(p.x, p.y);
  }
  return c;
}

double l2_norm(const FemSystem& sys, std::span<const double> c) {
  const Vector mc = sys.mass * c;
  return std::sqrt(std::max(0.0, kernels::dot(c, mc)));
}

double h1_seminorm(const FemSystem& sys, std::span<const double> c) {
  const Vector sc = sys.stiffness * c;
  return std::sqrt(std::max(0.0, kernels::dot(c, sc)));
}

ErrorNorms error_norms(const FemSystem& sys, std::span<const double> c, const SampledField& exact) {
  const Mesh& mesh = sys.mesh;
  if (c.size() != mesh.n_interior()) throw ConfigError("error_norms: coefficient vector has wrong length");
  const std::size_t per = kBary.size();
  const std::size_t n_pts = per * mesh.triangles.size();
  if (exact.value.size() != n_pts || exact.dx.size() != n_pts || exact.dy.size() != n_pts)
    throw ConfigError("error_norms: sampled field does not match the quadrature points");

  double l2 = 0.0, h1 = 0.0;
  const double area = mesh.triangle_area();
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    const ElementGeometry geo = geometry(mesh, tri);
    std::array<double, 3> nodal{};
    for (int a = 0; a < 3; ++a) {
      const Index r = mesh.interior_map[static_cast<std::size_t>(tri[a])];
      nodal[a] = r == kBoundary ? 0.0 : c[static_cast<std::size_t>(r)];
    }
    const double gx = nodal[0] * geo.grad[0][0] + nodal[1] * geo.grad[1][0] + nodal[2] * geo.grad[2][0];
    const double gy = nodal[0] * geo.grad[0][1] + nodal[1] * geo.grad[1][1] + nodal[2] * geo.grad[2][1];
    for (std::size_t q = 0; q < per; ++q) {
      const std::size_t k = t * per + q;
      const auto& l = kBary[q];
      const double uh = l[0] * nodal[0] + l[1] * nodal[1] + l[2] * nodal[2];
      const double w = kWeights[q] * area;
      const double e = uh - exact.value[k];
      const double ex = gx - exact.dx[k];
      const double ey = gy - exact.dy[k];
      l2 += w * e * e;
      h1 += w * (ex * ex + ey * ey);
    }
  }
  return {std::sqrt(l2), std::sqrt(h1)};
}

ErrorNorms error_norms(const FemSystem& sys, std::span<const double> c, const PointFn& u, const GradFn& grad_u) {
  SampledField f;
  for (const QuadPoint& qp : quadrature_points(sys.mesh)) {
    f.value.push_back(u(qp.x, qp.y));
    const auto g = grad_u(qp.x, qp.y);
    f.dx.push_back(g[0]);
    f.dy.push_back(g[1]);
  }
  return error_norms(sys, c, f);
}

}  // namespace fracstep::meshfem
