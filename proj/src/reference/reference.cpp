#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>

#include "fracstep/errors.hpp"
#include "fracstep/mlf.hpp"
#include "fracstep/reference.hpp"

namespace fracstep::reference {

namespace {

constexpr double kPi = std::numbers::pi;

double tail(double norm, double captured_sq) { return std::sqrt(std::max(0.0, norm * norm - captured_sq)); }

// Distinct coordinates of the quadrature points plus the index of each point's coordinate.
struct Axis {
  std::vector<double> values;
  std::vector<std::size_t> of_point;
};

Axis make_axis(const std::vector<meshfem::QuadPoint>& qp, bool use_x) {
  std::map<double, std::size_t> index;
  for (const auto& p : qp) index.emplace(use_x ? p.x : p.y, 0);
  Axis a;
  for (auto& [v, i] : index) {
    i = a.values.size();
    a.values.push_back(v);
  }
  a.of_point.reserve(qp.size());
  for (const auto& p : qp) a.of_point.push_back(index.at(use_x ? p.x : p.y));
  return a;
}

}  // namespace

ModalExpansion modal_coefficients(const CaseSpec& c, int k_max) {
  if (k_max < 1) throw ConfigError("modal cutoff must be at least 1");
  ModalExpansion e;
  e.kind = ExpansionKind::continuous;
  double sv = 0.0, sb = 0.0, sf = 0.0;
  for (int k = 1; k <= k_max; ++k) {
    for (int l = 1; l <= k_max; ++l) {
      const double vc = c.has_v ? c.vhat(k, l) : 0.0;
      const double bc = c.has_b ? c.bhat(k, l) : 0.0;
      const double fc = c.has_f ? c.fhat(k, l) : 0.0;
      if (vc == 0.0 && bc == 0.0 && fc == 0.0) continue;
      e.k.push_back(k);
      e.l.push_back(l);
      e.lambda.push_back(kPi * kPi * (static_cast<double>(k) * k + static_cast<double>(l) * l));
      e.v_coef.push_back(vc);
      e.b_coef.push_back(bc);
      e.f_coef.push_back(fc);
      sv += vc * vc;
      sb += bc * bc;
      sf += fc * fc;
    }
  }
  e.tail_bound = tail(c.v_norm, sv) + tail(c.b_norm, sb) + tail(c.f_space_norm, sf);
  return e;
}

std::vector<double> modal_amplitudes(const ModalExpansion& e, const CaseSpec& c, double t) {
  if (t < 0.0) throw ConfigError("evaluation time must be nonnegative");
  const double a = c.alpha;
  std::vector<double> out(e.size(), 0.0);
  for (std::size_t j = 0; j < e.size(); ++j) {
    const double lam = e.lambda[j];
    double u = 0.0;
    if (e.v_coef[j] != 0.0) u += e.v_coef[j] * mlf::mlf_scaled_t({a, 1.0}, lam, t);
    if (e.b_coef[j] != 0.0) u += e.b_coef[j] * mlf::mlf_scaled_t({a, 2.0}, lam, t);
    if (e.f_coef[j] != 0.0) u += e.f_coef[j] * duhamel_mode(a, lam, t);
    out[j] = u;
  }
  return out;
}

meshfem::SampledField sample_modal_field(const ModalExpansion& e, std::span<const double> amplitudes,
                                         const meshfem::Mesh& mesh) {
  if (e.kind != ExpansionKind::continuous) throw ConfigError("field sampling needs a continuous expansion");
  const auto qp = meshfem::quadrature_points(mesh);
  const Axis ax = make_axis(qp, true);
  const Axis ay = make_axis(qp, false);
  const int k_max = e.size() ? *std::max_element(e.k.begin(), e.k.end()) : 0;
  const int l_max = e.size() ? *std::max_element(e.l.begin(), e.l.end()) : 0;
  const std::size_t ny = ay.values.size(), nx = ax.values.size();

  // Separable evaluation: B_k(y) = sum_l a_kl sin(l pi y), then sum over k.
  std::vector<double> sin_y(static_cast<std::size_t>(l_max + 1) * ny), cos_y(sin_y.size());
  for (int l = 1; l <= l_max; ++l)
    for (std::size_t i = 0; i < ny; ++i) {
      sin_y[l * ny + i] = std::sin(l * kPi * ay.values[i]);
      cos_y[l * ny + i] = l * kPi * std::cos(l * kPi * ay.values[i]);
    }
  std::vector<double> by(static_cast<std::size_t>(k_max + 1) * ny, 0.0), dby(by.size(), 0.0);
  std::vector<char> active(k_max + 1, 0);
  for (std::size_t j = 0; j < e.size(); ++j) {
    const int k = e.k[j], l = e.l[j];
    const double a = amplitudes[j];
    if (a == 0.0) continue;
    active[k] = 1;
    double* row = &by[k * ny];
    double* drow = &dby[k * ny];
    const double* s = &sin_y[l * ny];
    const double* cs = &cos_y[l * ny];
    for (std::size_t i = 0; i < ny; ++i) {
      row[i] += a * s[i];
      drow[i] += a * cs[i];
    }
  }
  std::vector<double> sin_x(static_cast<std::size_t>(k_max + 1) * nx), cos_x(sin_x.size());
  for (int k = 1; k <= k_max; ++k)
    for (std::size_t i = 0; i < nx; ++i) {
      sin_x[k * nx + i] = std::sin(k * kPi * ax.values[i]);
      cos_x[k * nx + i] = k * kPi * std::cos(k * kPi * ax.values[i]);
    }

  meshfem::SampledField f;
  f.value.assign(qp.size(), 0.0);
  f.dx.assign(qp.size(), 0.0);
  f.dy.assign(qp.size(), 0.0);
  for (std::size_t p = 0; p < qp.size(); ++p) {
    const std::size_t xi = ax.of_point[p], yi = ay.of_point[p];
    double u = 0.0, ux = 0.0, uy = 0.0;
    for (int k = 1; k <= k_max; ++k) {
      if (!active[k]) continue;
      const double b = by[k * ny + yi];
      u += sin_x[k * nx + xi] * b;
      ux += cos_x[k * nx + xi] * b;
      uy += sin_x[k * nx + xi] * dby[k * ny + yi];
    }
    f.value[p] = 2.0 * u;
    f.dx[p] = 2.0 * ux;
    f.dy[p] = 2.0 * uy;
  }
  return f;
}

double evaluate_modal(const ModalExpansion& e, std::span<const double> amplitudes, double x, double y) {
  if (e.kind != ExpansionKind::continuous) throw ConfigError("pointwise evaluation needs a continuous expansion");
  double u = 0.0;
  for (std::size_t j = 0; j < e.size(); ++j)
    u += amplitudes[j] * std::sin(e.k[j] * kPi * x) * std::sin(e.l[j] * kPi * y);
  return 2.0 * u;
}

double modal_l2_norm(std::span<const double> amplitudes) {
  double s = 0.0;
  for (double a : amplitudes) s += a * a;
  return std::sqrt(s);
}

double modal_h1_seminorm(const ModalExpansion& e, std::span<const double> amplitudes) {
  double s = 0.0;
  for (std::size_t j = 0; j < e.size(); ++j) s += e.lambda[j] * amplitudes[j] * amplitudes[j];
  return std::sqrt(s);
}

DiscreteData discretize(const meshfem::FemSystem& sys, const CaseSpec& c, Projection projection) {
  const std::size_t n = sys.mesh.n_interior();
  DiscreteData d;
  d.v.assign(n, 0.0);
  d.b.assign(n, 0.0);
  d.f_load.assign(n, 0.0);
  if (c.has_v) {
    if (projection == Projection::Ritz) {
      if (!c.grad_v) throw ConfigError(std::string("case ") + c.id + " has no gradient for the Ritz projection");
      d.v = meshfem::ritz_project(sys, c.grad_v);
    } else {
      d.v = meshfem::l2_project(sys, c.v);
    }
  }
  if (c.has_b) d.b = meshfem::l2_project(sys, c.b);
  if (c.has_f) d.f_load = meshfem::load_vector(sys, c.f_space);
  d.mass_v = sys.mass * d.v;
  d.mass_b = sys.mass * d.b;
  return d;
}

DiscreteData discretize(const ModalExpansion& e) {
  if (e.kind != ExpansionKind::continuous) throw ConfigError("sine-mode data need a continuous expansion");
  return {e.v_coef, e.b_coef, e.f_coef, e.v_coef, e.b_coef};
}

ModalSystem modal_system(const ModalExpansion& e) { return ModalSystem(e.lambda); }

std::shared_ptr<const numkit::EigenBasis> discrete_basis(const meshfem::FemSystem& sys) {
  if (sys.mesh.n_interior() > kDiscreteDofLimit)
    throw ConfigError("discrete modal reference limited to " + std::to_string(kDiscreteDofLimit) +
                      " interior dofs; use the self_convergence reference on finer meshes");
  return std::make_shared<numkit::EigenBasis>(numkit::gen_sym_eig(numkit::DenseSymMatrix::from_sparse(sys.stiffness),
                                                                  numkit::DenseSymMatrix::from_sparse(sys.mass)));
}

ModalExpansion discrete_expansion(const meshfem::FemSystem& sys, const DiscreteData& data,
                                  std::shared_ptr<const numkit::EigenBasis> basis) {
  const std::size_t n = sys.mesh.n_interior();
  if (!basis) basis = discrete_basis(sys);
  if (basis->n != n) throw ConfigError("eigenbasis does not match the finite element system");
  ModalExpansion e;
  e.kind = ExpansionKind::discrete;
  e.lambda = basis->values;
  e.v_coef.resize(n);
  e.b_coef.resize(n);
  e.f_coef.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto phi = basis->vector(j);
    e.v_coef[j] = kernels::dot(phi, data.mass_v);
    e.b_coef[j] = kernels::dot(phi, data.mass_b);
    e.f_coef[j] = kernels::dot(phi, data.f_load);
  }
  e.basis = std::move(basis);
  return e;
}

Vector synthesize(const ModalExpansion& discrete, std::span<const double> amplitudes) {
  if (discrete.kind != ExpansionKind::discrete || !discrete.basis)
    throw ConfigError("synthesis needs a discrete expansion");
  const auto& basis = *discrete.basis;
  Vector u(basis.n, 0.0);
  for (std::size_t j = 0; j < basis.n; ++j)
    if (amplitudes[j] != 0.0) kernels::axpy(amplitudes[j], basis.vector(j), u);
  return u;
}

std::vector<double> analyze(const meshfem::FemSystem& sys, const ModalExpansion& discrete, std::span<const double> x) {
  if (discrete.kind != ExpansionKind::discrete || !discrete.basis)
    throw ConfigError("analysis needs a discrete expansion");
  const Vector mx = sys.mass * x;
  std::vector<double> c(discrete.basis->n);
  for (std::size_t j = 0; j < c.size(); ++j) c[j] = kernels::dot(discrete.basis->vector(j), mx);
  return c;
}

Vector discrete_reference(const meshfem::FemSystem& sys, const CaseSpec& c, double t, Projection projection) {
  const auto e = discrete_expansion(sys, discretize(sys, c, projection));
  return synthesize(e, modal_amplitudes(e, c, t));
}

}  // namespace fracstep::reference
