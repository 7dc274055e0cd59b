/// \file assembly.hpp
/// \brief Assembly of the conforming form, the polynomial-extension boundary
///        correction, the load functional, and the naive comparator.
///
/// The discrete operator is
///
///   B(w, v) = int_{Omega_h} (p grad w . grad v + q w v)
///           + <p(eta) grad w|_eta . n - p(xi) grad w . n_h, v>_{Gamma_h}
///
/// where grad w|_eta is the gradient of the owner element's polynomial
/// extrapolated to the projected boundary point. The trial side extends,
/// the test side stays on the facet, so the correction is nonsymmetric.
/// The matching right-hand side evaluates the Neumann datum only at the
/// projected points. Volume and extension parts are kept separately
/// addressable: the perturbation-decay check and the baseline swap both
/// need them apart.

#ifndef PEFEM_ASSEMBLY_HPP
#define PEFEM_ASSEMBLY_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "pefem/boundary.hpp"
#include "pefem/errors.hpp"
#include "pefem/fespace.hpp"
#include "pefem/geometry.hpp"
#include "pefem/quadrature.hpp"
#include "pefem/taylor.hpp"

namespace pefem {

using SparseMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// Coefficients, data, and (optionally) the manufactured solution of
///   -div(p grad u) + q u = f  in Omega,   p grad u . n = g_N  on Gamma.
struct ProblemData {
  SmoothField p;
  SmoothField q;
  std::optional<SmoothField> exact;
  std::function<double(Vec2)> source;              ///< f
  std::function<double(Vec2, Vec2)> neumann;       ///< g_N(point, unit normal)
  std::string name;
  int smoothness = 99;

  /// Derive source and flux data from a manufactured solution. Globally
  /// analytic expressions make the extended and exact data coincide.
  static ProblemData manufactured(std::string name, SmoothField u,
                                  SmoothField p, SmoothField q) {
    ProblemData d;
    d.name = std::move(name);
    d.smoothness = std::min({u.smoothness, p.smoothness, q.smoothness});
    d.source = [u, p, q](Vec2 x) {
      const double px = p.deriv(1, 0, x.x, x.y);
      const double py = p.deriv(0, 1, x.x, x.y);
      const double ux = u.deriv(1, 0, x.x, x.y);
      const double uy = u.deriv(0, 1, x.x, x.y);
      const double lap = u.deriv(2, 0, x.x, x.y) + u.deriv(0, 2, x.x, x.y);
      return -(px * ux + py * uy + p.value(x) * lap) + q.value(x) * u.value(x);
    };
    d.neumann = [u, p](Vec2 x, Vec2 n) {
      return p.value(x) * u.grad(x).dot(n);
    };
    d.exact = std::move(u);
    d.p = std::move(p);
    d.q = std::move(q);
    return d;
  }
};

/// Manufactured problem catalog used by the run configuration. All entries
/// use unit coefficients; the polynomial entry has degree exactly k.
inline ProblemData problem_catalog(const std::string& name, int degree) {
  const SmoothField one = fields::constant(1.0);
  if (name == "constant")
    return ProblemData::manufactured(
        "constant", fields::polynomial("one", {{1.0, 0, 0}}), one, one);
  if (name == "poly" || name == "poly_k") {
    std::vector<fields::Monomial> terms;
    if (degree == 1)
      terms = {{2.0, 1, 0}, {-1.0, 0, 1}, {3.0, 0, 0}};
    else if (degree == 2)
      terms = {{1.0, 2, 0}, {-1.0, 0, 1}, {3.0, 0, 0}};
    else
      terms = {{1.0, 3, 0}, {-2.0, 1, 1}, {0.5, 0, 2}, {1.0, 0, 1},
               {-1.0, 0, 0}};
    return ProblemData::manufactured(
        "poly_k", fields::polynomial("poly", std::move(terms)), one, one);
  }
  if (name == "exp_sin")
    return ProblemData::manufactured("exp_sin", fields::exp_sin(), one, one);
  if (name == "trig")
    return ProblemData::manufactured("trig", fields::trig_cosh(), one, one);
  throw ConfigError("unknown problem '" + name +
                    "' (catalog: constant, poly_k, exp_sin, trig)");
}

/// Assembled system with the extension correction kept apart from the
/// conforming part.
struct LinearSystem {
  SparseMat volume;
  SparseMat extension;
  Vector load;
  int quad_volume = 0;
  int quad_boundary = 0;

  SparseMat full() const { return volume + extension; }
  int dofs() const { return static_cast<int>(load.size()); }
};

/// Conforming part int p grad w . grad v + q w v over all triangles;
/// quadrature exactness 2k+2.
inline SparseMat assemble_volume(const FeSpace& space,
                                 const ProblemData& data) {
  const int k = space.degree();
  const auto rule = make_quadrature(QuadKind::triangle, 2 * k + 2);
  const auto& mesh = space.mesh();

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(mesh.n_triangles() * space.local_dofs() * space.local_dofs());
  std::vector<double> vals;
  std::vector<Vec2> grads;
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto c = mesh.tri_coords(t);
    const double jac = std::abs(space.jacobian(t));
    const auto& dofs = space.element_dofs(t);
    const int nl = space.local_dofs();
    std::vector<double> local(nl * nl, 0.0);
    for (std::size_t qi = 0; qi < rule.size(); ++qi) {
      const Vec2 x = c[0] * rule.bary[qi][0] + c[1] * rule.bary[qi][1] +
                     c[2] * rule.bary[qi][2];
      const double w = rule.weights[qi] * jac;
      space.eval_basis_grad(t, x, vals, grads);
      const double pv = data.p.value(x);
      const double qv = data.q.value(x);
      for (int i = 0; i < nl; ++i)
        for (int j = 0; j < nl; ++j)
          local[i * nl + j] +=
              w * (pv * grads[i].dot(grads[j]) + qv * vals[i] * vals[j]);
    }
    for (int i = 0; i < nl; ++i)
      for (int j = 0; j < nl; ++j)
        trips.emplace_back(dofs[i], dofs[j], local[i * nl + j]);
  }
  SparseMat A(space.n_dofs(), space.n_dofs());
  A.setFromTriplets(trips.begin(), trips.end());
  return A;
}

/// Extension boundary correction assembled from precomputed facet traces.
/// Exposed separately so the flat-boundary limit (eta = xi, n = n_h) can be
/// exercised directly.
inline SparseMat assemble_extension_from_traces(
    const FeSpace& space, const std::vector<EdgeQuadPoint>& traces,
    const ProblemData& data) {
  std::vector<Eigen::Triplet<double>> trips;
  std::vector<double> vals_xi, vals_eta;
  std::vector<Vec2> grads_xi, grads_eta;
  const int nl = space.local_dofs();
  for (const auto& qp : traces) {
    const auto& dofs = space.element_dofs(qp.owner);
    space.eval_basis_grad(qp.owner, qp.xi, vals_xi, grads_xi);
    space.eval_basis_grad(qp.owner, qp.trace.eta, vals_eta, grads_eta);
    const double p_eta = data.p.value(qp.trace.eta);
    const double p_xi = data.p.value(qp.xi);
    const Vec2 n = qp.trace.n;
    const Vec2 nh = *qp.trace.n_h;
    for (int j = 0; j < nl; ++j) {
      // extended exact-normal flux minus facet flux of the trial function
      const double trial =
          p_eta * grads_eta[j].dot(n) - p_xi * grads_xi[j].dot(nh);
      if (trial == 0.0) continue;
      for (int i = 0; i < nl; ++i) {
        const double v = qp.weight * vals_xi[i] * trial;
        if (v != 0.0) trips.emplace_back(dofs[i], dofs[j], v);
      }
    }
  }
  SparseMat A(space.n_dofs(), space.n_dofs());
  A.setFromTriplets(trips.begin(), trips.end());
  return A;
}

inline SparseMat assemble_extension_boundary(const FeSpace& space,
                                             const CurvedDomain& domain,
                                             const ProblemData& data) {
  const auto rule =
      make_quadrature(QuadKind::segment, 2 * space.degree() + 2);
  return assemble_extension_from_traces(
      space, boundary_quadrature(space.mesh(), domain, rule), data);
}

namespace detail {

/// Volume part of the load: int f v.
inline Vector assemble_source_load(const FeSpace& space,
                                   const ProblemData& data) {
  const auto rule =
      make_quadrature(QuadKind::triangle, 2 * space.degree() + 2);
  const auto& mesh = space.mesh();
  Vector b = Vector::Zero(space.n_dofs());
  std::vector<double> vals;
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto c = mesh.tri_coords(t);
    const double jac = std::abs(space.jacobian(t));
    const auto& dofs = space.element_dofs(t);
    for (std::size_t qi = 0; qi < rule.size(); ++qi) {
      const Vec2 x = c[0] * rule.bary[qi][0] + c[1] * rule.bary[qi][1] +
                     c[2] * rule.bary[qi][2];
      const double w = rule.weights[qi] * jac * data.source(x);
      space.eval_basis(t, x, vals);
      for (int i = 0; i < space.local_dofs(); ++i) b[dofs[i]] += w * vals[i];
    }
  }
  return b;
}

/// Boundary load <g, v>_{Gamma_h}; `projected` selects the PE-FEM datum
/// g_N(eta, n) versus the naive facet datum g_N(xi, n_h).
inline Vector assemble_neumann_load(const FeSpace& space,
                                    const std::vector<EdgeQuadPoint>& traces,
                                    const ProblemData& data, bool projected) {
  Vector b = Vector::Zero(space.n_dofs());
  std::vector<double> vals;
  for (const auto& qp : traces) {
    const double g = projected ? data.neumann(qp.trace.eta, qp.trace.n)
                               : data.neumann(qp.xi, *qp.trace.n_h);
    const auto& dofs = space.element_dofs(qp.owner);
    space.eval_basis(qp.owner, qp.xi, vals);
    for (int i = 0; i < space.local_dofs(); ++i)
      b[dofs[i]] += qp.weight * g * vals[i];
  }
  return b;
}

}  // namespace detail

/// PE-FEM right-hand side: <f, v> + <g_N o eta, v>_{Gamma_h}.
inline Vector assemble_load(const FeSpace& space, const CurvedDomain& domain,
                            const ProblemData& data) {
  const auto rule =
      make_quadrature(QuadKind::segment, 2 * space.degree() + 2);
  const auto traces = boundary_quadrature(space.mesh(), domain, rule);
  return detail::assemble_source_load(space, data) +
         detail::assemble_neumann_load(space, traces, data, true);
}

/// Naive comparator ("do nothing" on the geometry): zero boundary operator
/// and the Neumann datum integrated where the facets actually are.
inline std::pair<SparseMat, Vector> assemble_baseline_boundary(
    const FeSpace& space, const ProblemData& data) {
  const auto rule =
      make_quadrature(QuadKind::segment, 2 * space.degree() + 2);
  // facet normals and weights only; projections unused by the baseline
  SparseMat zero(space.n_dofs(), space.n_dofs());
  Vector b = Vector::Zero(space.n_dofs());
  std::vector<double> vals;
  const auto& mesh = space.mesh();
  for (const auto& be : mesh.boundary_edges) {
    const Vec2 a = mesh.vertices[be.a];
    const Vec2 bb = mesh.vertices[be.b];
    const double len = (bb - a).norm();
    const Vec2 nh = facet_normal(a, bb);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Vec2 xi = a + (bb - a) * rule.t[q];
      const double g = data.neumann(xi, nh);
      const auto& dofs = space.element_dofs(be.tri);
      space.eval_basis(be.tri, xi, vals);
      for (int i = 0; i < space.local_dofs(); ++i)
        b[dofs[i]] += rule.weights[q] * len * g * vals[i];
    }
  }
  return {zero, b};
}

enum class Method { pefem, baseline };

/// Full assembly for either method on a shared mesh and problem.
inline LinearSystem assemble_system(const FeSpace& space,
                                    const CurvedDomain& domain,
                                    const ProblemData& data, Method method) {
  LinearSystem sys;
  sys.quad_volume = 2 * space.degree() + 2;
  sys.quad_boundary = 2 * space.degree() + 2;
  sys.volume = assemble_volume(space, data);
  if (method == Method::pefem) {
    sys.extension = assemble_extension_boundary(space, domain, data);
    sys.load = assemble_load(space, domain, data);
  } else {
    auto [zero, adjust] = assemble_baseline_boundary(space, data);
    sys.extension = std::move(zero);
    sys.load = detail::assemble_source_load(space, data) + adjust;
  }
  return sys;
}

/// Matrix Market export (coordinate format) for debugging.
inline void write_matrix_market(const SparseMat& A, std::ostream& os) {
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << A.rows() << " " << A.cols() << " " << A.nonZeros() << "\n";
  char buf[64];
  for (int r = 0; r < A.outerSize(); ++r)
    for (SparseMat::InnerIterator it(A, r); it; ++it) {
      std::snprintf(buf, sizeof(buf), "%d %d %.17g\n",
                    static_cast<int>(it.row()) + 1,
                    static_cast<int>(it.col()) + 1, it.value());
      os << buf;
    }
}

}  // namespace pefem

#endif  // PEFEM_ASSEMBLY_HPP
