/// \file boundary.hpp
/// \brief Quadrature points on the polygonal boundary with their projections
///        onto the exact curve. Shared by the boundary assembly and the
///        Taylor-operator rate checks.

#ifndef PEFEM_BOUNDARY_HPP
#define PEFEM_BOUNDARY_HPP

#include <vector>

#include "pefem/geometry.hpp"
#include "pefem/mesh.hpp"
#include "pefem/quadrature.hpp"

namespace pefem {

struct EdgeQuadPoint {
  int edge = -1;   ///< index into mesh.boundary_edges
  int owner = -1;  ///< owning triangle
  Vec2 xi;         ///< quadrature point on the facet
  double weight = 0.0;  ///< segment weight scaled by edge length
  BoundaryTrace trace;  ///< projection of xi, with the facet normal attached
};

/// Gauss points on every boundary edge, each projected onto the exact curve.
/// Projections are seeded from the edge's own parameter window, which keeps
/// them on the subtended arc.
inline std::vector<EdgeQuadPoint> boundary_quadrature(
    const PolygonalMesh& mesh, const CurvedDomain& domain,
    const QuadratureRule& seg_rule) {
  std::vector<EdgeQuadPoint> out;
  out.reserve(mesh.boundary_edges.size() * seg_rule.size());
  for (std::size_t e = 0; e < mesh.boundary_edges.size(); ++e) {
    const BoundaryEdge& be = mesh.boundary_edges[e];
    const Vec2 a = mesh.vertices[be.a];
    const Vec2 b = mesh.vertices[be.b];
    const double len = (b - a).norm();
    const Vec2 nh = facet_normal(a, b);

    // short-way parameter window of the subtended arc, padded
    double w = CurvedDomain::wrap(be.t_b - be.t_a);
    double lo = be.t_a;
    if (w > 0.5) {
      lo = be.t_b;
      w = 1.0 - w;
    }
    const double pad = 0.2 * w + 1e-9;

    for (std::size_t q = 0; q < seg_rule.size(); ++q) {
      EdgeQuadPoint p;
      p.edge = static_cast<int>(e);
      p.owner = be.tri;
      p.xi = a + (b - a) * seg_rule.t[q];
      p.weight = seg_rule.weights[q] * len;
      p.trace = detail::closest_point_in_window(domain, p.xi, lo - pad,
                                                w + 2.0 * pad);
      p.trace.n_h = nh;
      out.push_back(p);
    }
  }
  return out;
}

}  // namespace pefem

#endif  // PEFEM_BOUNDARY_HPP
