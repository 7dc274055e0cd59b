/// \file mesh.hpp
/// \brief Straight-edged triangulations of catalog domains with all boundary
///        vertices on the exact curve, uniform red refinement with boundary
///        re-projection, and the plain-text mesh format.
///
/// The generator builds concentric scaled copies of the boundary polygon
/// toward the centroid (valid for star-shaped domains). Ring vertex counts
/// halve as the rings shrink so the family stays shape-regular; the last
/// ring is closed with a fan at the centroid. Refinement quarters every
/// triangle and re-projects boundary midpoints onto the curve, which keeps
/// the boundary gap scaling like h^2.

#ifndef PEFEM_MESH_HPP
#define PEFEM_MESH_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "pefem/errors.hpp"
#include "pefem/geometry.hpp"
#include "pefem/vec.hpp"

namespace pefem {

struct BoundaryEdge {
  int a = -1;          ///< first vertex, directed CCW along the boundary
  int b = -1;          ///< second vertex
  int tri = -1;        ///< owning triangle
  double t_a = 0.0;    ///< curve parameter of vertex a
  double t_b = 0.0;    ///< curve parameter of vertex b
};

struct PolygonalMesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;  ///< CCW connectivity
  std::vector<BoundaryEdge> boundary_edges;
  double h = 0.0;        ///< max triangle diameter
  double delta_h = 0.0;  ///< measured boundary gap
  int level = 0;

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_triangles() const { return static_cast<int>(triangles.size()); }

  std::array<Vec2, 3> tri_coords(int t) const {
    const auto& c = triangles[t];
    return {vertices[c[0]], vertices[c[1]], vertices[c[2]]};
  }

  double signed_area(int t) const {
    const auto p = tri_coords(t);
    return 0.5 * (p[1] - p[0]).cross(p[2] - p[0]);
  }

  double tri_diameter(int t) const {
    const auto p = tri_coords(t);
    return std::max({(p[1] - p[0]).norm(), (p[2] - p[1]).norm(),
                     (p[0] - p[2]).norm()});
  }

  double compute_h() const {
    double m = 0.0;
    for (int t = 0; t < n_triangles(); ++t) m = std::max(m, tri_diameter(t));
    return m;
  }

  /// Smallest interior angle over all triangles, in degrees.
  double min_angle_deg() const {
    double worst = 180.0;
    for (int t = 0; t < n_triangles(); ++t) {
      const auto p = tri_coords(t);
      for (int i = 0; i < 3; ++i) {
        const Vec2 u = p[(i + 1) % 3] - p[i];
        const Vec2 v = p[(i + 2) % 3] - p[i];
        const double ang =
            std::atan2(std::abs(u.cross(v)), u.dot(v)) * 180.0 /
            3.14159265358979323846;
        worst = std::min(worst, ang);
      }
    }
    return worst;
  }

  double total_area() const {
    double s = 0.0;
    for (int t = 0; t < n_triangles(); ++t) s += signed_area(t);
    return s;
  }
};

namespace detail {

inline std::uint64_t edge_key(int a, int b) {
  const std::uint64_t lo = static_cast<std::uint32_t>(std::min(a, b));
  const std::uint64_t hi = static_cast<std::uint32_t>(std::max(a, b));
  return (hi << 32) | lo;
}

/// Count triangle multiplicity per undirected edge.
inline std::map<std::uint64_t, std::vector<int>> edge_to_triangles(
    const PolygonalMesh& mesh) {
  std::map<std::uint64_t, std::vector<int>> m;
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& c = mesh.triangles[t];
    for (int i = 0; i < 3; ++i)
      m[edge_key(c[i], c[(i + 1) % 3])].push_back(t);
  }
  return m;
}

/// Rebuild the boundary-edge list from connectivity: edges incident to
/// exactly one triangle, directed as they appear in the owner's CCW cycle.
inline void rebuild_boundary_edges(PolygonalMesh& mesh,
                                   const std::map<int, double>& vertex_param) {
  const auto e2t = edge_to_triangles(mesh);
  mesh.boundary_edges.clear();
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& c = mesh.triangles[t];
    for (int i = 0; i < 3; ++i) {
      const int a = c[i], b = c[(i + 1) % 3];
      if (e2t.at(edge_key(a, b)).size() == 1) {
        BoundaryEdge e;
        e.a = a;
        e.b = b;
        e.tri = t;
        e.t_a = vertex_param.at(a);
        e.t_b = vertex_param.at(b);
        mesh.boundary_edges.push_back(e);
      }
    }
  }
}

inline void enforce_quality(const PolygonalMesh& mesh) {
  const double ang = mesh.min_angle_deg();
  if (ang < 15.0)
    throw QualityFailure("mesh has a triangle angle of " +
                         std::to_string(ang) + " degrees (< 15)");
}

}  // namespace detail

inline double measure_delta_h(PolygonalMesh& mesh, const CurvedDomain& domain);

/// Generate a triangulation of `domain` with `n_boundary` arclength-
/// equispaced boundary vertices on the exact curve.
inline PolygonalMesh generate_mesh(const CurvedDomain& domain,
                                   int n_boundary) {
  if (n_boundary < 8)
    throw ConfigError("generate_mesh: n_boundary must be >= 8");

  PolygonalMesh mesh;
  const double P = domain.perimeter();
  const double ell = P / n_boundary;  // target edge length
  const Vec2 c = domain.centroid();

  // boundary ring: vertices on the curve, CCW
  std::vector<double> tparam(n_boundary);
  std::vector<Vec2> base(n_boundary);
  for (int i = 0; i < n_boundary; ++i) {
    tparam[i] = domain.param_at_arclength(P * i / n_boundary);
    base[i] = domain.gamma(tparam[i]);
    mesh.vertices.push_back(base[i]);
  }

  double r_min = 1e300, r_mean = 0.0;
  for (const Vec2& w : base) {
    const double r = (w - c).norm();
    r_min = std::min(r_min, r);
    r_mean += r;
  }
  r_mean /= n_boundary;

  // rings of scaled copies of the boundary polygon; vertex counts halve as
  // the rings shrink
  struct Ring {
    std::vector<int> ids;
  };
  Ring current;
  current.ids.resize(n_boundary);
  for (int i = 0; i < n_boundary; ++i) current.ids[i] = i;

  auto zip_rings = [&mesh](const Ring& outer, const Ring& inner) {
    const int na = static_cast<int>(outer.ids.size());
    const int nb = static_cast<int>(inner.ids.size());
    int i = 0, j = 0;
    while (i < na || j < nb) {
      bool adv_outer;
      if (i >= na)
        adv_outer = false;
      else if (j >= nb)
        adv_outer = true;
      else
        adv_outer = (static_cast<long>(i + 1) * nb <=
                     static_cast<long>(j + 1) * na);
      if (adv_outer) {
        mesh.triangles.push_back(
            {outer.ids[i % na], outer.ids[(i + 1) % na], inner.ids[j % nb]});
        ++i;
      } else {
        mesh.triangles.push_back(
            {outer.ids[i % na], inner.ids[(j + 1) % nb], inner.ids[j % nb]});
        ++j;
      }
    }
  };

  double r_max = 0.0;
  for (const Vec2& w : base) r_max = std::max(r_max, (w - c).norm());

  // ring marching: radial step 1.2*ell (the smoothing pass evens out the
  // slightly coarse rings), vertex-count halving when spacing drops under
  // 0.5*ell. A ring whose fan would have legs longer than 1.4*ell gets one
  // more ring halfway to the centroid before fanning.
  double s = 1.0;
  int n = n_boundary;
  int step = 1;
  for (int guard = 0; guard < 10000; ++guard) {
    double s_next = s - 1.2 * ell / r_max;
    if (s_next * r_max < 1.4 * ell) {
      if (s * r_max <= 1.25 * ell) break;  // small enough to fan directly
      s_next = 0.5 * s;                   // halfway ring, fan next round
      if (s_next * r_max < 0.5 * ell) break;
    }

    int n_next = n, step_next = step;
    while (s_next * P / n_next < 0.5 * ell && n_next % 2 == 0 &&
           n_next >= 16) {
      n_next /= 2;
      step_next *= 2;
    }

    Ring next;
    next.ids.reserve(n_next);
    for (int i = 0; i < n_next; ++i) {
      const Vec2 w = base[(i * step_next) % n_boundary];
      next.ids.push_back(mesh.n_vertices());
      mesh.vertices.push_back(c + (w - c) * s_next);
    }
    zip_rings(current, next);
    current = next;
    s = s_next;
    n = n_next;
    step = step_next;
  }

  // fan to the centroid
  const int center = mesh.n_vertices();
  mesh.vertices.push_back(c);
  const int nc = static_cast<int>(current.ids.size());
  for (int i = 0; i < nc; ++i)
    mesh.triangles.push_back(
        {current.ids[i], current.ids[(i + 1) % nc], center});

  for (int t = 0; t < mesh.n_triangles(); ++t)
    if (mesh.signed_area(t) < 0.0)
      std::swap(mesh.triangles[t][1], mesh.triangles[t][2]);

  // Laplacian smoothing of interior vertices evens out the layered
  // construction; boundary vertices stay pinned to the curve.
  {
    std::vector<std::vector<int>> nbr(mesh.n_vertices());
    for (const auto& tri : mesh.triangles)
      for (int i = 0; i < 3; ++i) {
        nbr[tri[i]].push_back(tri[(i + 1) % 3]);
        nbr[tri[i]].push_back(tri[(i + 2) % 3]);
      }
    for (int sweep = 0; sweep < 8; ++sweep) {
      std::vector<Vec2> next = mesh.vertices;
      for (int v = n_boundary; v < mesh.n_vertices(); ++v) {
        Vec2 avg{0, 0};
        for (int u : nbr[v]) avg += mesh.vertices[u];
        next[v] = avg / static_cast<double>(nbr[v].size());
      }
      mesh.vertices = next;
    }
    for (int t = 0; t < mesh.n_triangles(); ++t)
      if (mesh.signed_area(t) <= 0.0)
        throw QualityFailure("generate_mesh: smoothing inverted a triangle");
  }

  std::map<int, double> vparam;
  for (int i = 0; i < n_boundary; ++i) vparam[i] = tparam[i];
  detail::rebuild_boundary_edges(mesh, vparam);

  mesh.h = mesh.compute_h();
  mesh.level = 0;
  detail::enforce_quality(mesh);
  measure_delta_h(mesh, domain);
  return mesh;
}

/// Uniform red refinement; boundary-edge midpoints are re-projected onto the
/// exact curve.
inline PolygonalMesh refine(const PolygonalMesh& mesh,
                            const CurvedDomain& domain) {
  PolygonalMesh out;
  out.vertices = mesh.vertices;
  out.level = mesh.level + 1;

  std::map<int, double> vparam;
  std::map<std::uint64_t, bool> is_boundary;
  for (const auto& e : mesh.boundary_edges) {
    vparam[e.a] = e.t_a;
    vparam[e.b] = e.t_b;
    is_boundary[detail::edge_key(e.a, e.b)] = true;
  }

  std::map<std::uint64_t, int> midpoint;
  auto mid_of = [&](int a, int b) {
    const std::uint64_t key = detail::edge_key(a, b);
    const auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    const Vec2 m = (out.vertices[a] + out.vertices[b]) * 0.5;
    const int id = out.n_vertices();
    if (is_boundary.count(key)) {
      const BoundaryTrace tr = closest_point(domain, m);
      out.vertices.push_back(tr.eta);
      vparam[id] = tr.t;
    } else {
      out.vertices.push_back(m);
    }
    midpoint[key] = id;
    return id;
  };

  for (const auto& tri : mesh.triangles) {
    const int v0 = tri[0], v1 = tri[1], v2 = tri[2];
    const int m01 = mid_of(v0, v1);
    const int m12 = mid_of(v1, v2);
    const int m20 = mid_of(v2, v0);
    out.triangles.push_back({v0, m01, m20});
    out.triangles.push_back({m01, v1, m12});
    out.triangles.push_back({m20, m12, v2});
    out.triangles.push_back({m01, m12, m20});
  }

  detail::rebuild_boundary_edges(out, vparam);
  out.h = out.compute_h();
  detail::enforce_quality(out);
  measure_delta_h(out, domain);
  return out;
}

/// Max gap between the straight boundary and the exact curve, over all
/// boundary edges. Also stored into the mesh record.
inline double measure_delta_h(PolygonalMesh& mesh,
                              const CurvedDomain& domain) {
  double d = 0.0;
  for (const auto& e : mesh.boundary_edges)
    d = std::max(d, chord_gap(domain, mesh.vertices[e.a], mesh.vertices[e.b]));
  mesh.delta_h = d;
  return d;
}

/// Conformity: interior edges shared by exactly two triangles, boundary
/// edges by exactly one.
inline bool check_conformity(const PolygonalMesh& mesh) {
  const auto e2t = detail::edge_to_triangles(mesh);
  std::size_t boundary = 0;
  for (const auto& [key, tris] : e2t) {
    if (tris.size() == 1)
      ++boundary;
    else if (tris.size() != 2)
      return false;
  }
  return boundary == mesh.boundary_edges.size();
}

/// V - E + F with the outer face included; 2 for a triangulated disk.
inline int euler_characteristic(const PolygonalMesh& mesh) {
  const auto e2t = detail::edge_to_triangles(mesh);
  return mesh.n_vertices() - static_cast<int>(e2t.size()) +
         mesh.n_triangles() + 1;
}

// --- plain-text mesh format --------------------------------------------

inline void write_mesh(const PolygonalMesh& mesh, std::ostream& os) {
  char buf[64];
  auto num = [&buf](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  os << "pefem-mesh v1\n";
  os << "vertices " << mesh.n_vertices() << "\n";
  for (const Vec2& v : mesh.vertices)
    os << num(v.x) << " " << num(v.y) << "\n";
  os << "triangles " << mesh.n_triangles() << "\n";
  for (const auto& t : mesh.triangles)
    os << t[0] << " " << t[1] << " " << t[2] << "\n";
  os << "boundary_edges " << mesh.boundary_edges.size() << "\n";
  for (const auto& e : mesh.boundary_edges)
    os << e.a << " " << e.b << " " << num(e.t_a) << " " << num(e.t_b) << "\n";
}

/// Parse the plain-text format. The boundary gap is not stored in the file;
/// call measure_delta_h afterwards when a domain is available.
inline PolygonalMesh read_mesh(std::istream& is) {
  PolygonalMesh mesh;
  std::string tag, version;
  is >> tag >> version;
  if (tag != "pefem-mesh" || version != "v1")
    throw ConfigError("read_mesh: bad header '" + tag + " " + version + "'");

  std::size_t n = 0;
  is >> tag >> n;
  if (tag != "vertices") throw ConfigError("read_mesh: expected 'vertices'");
  mesh.vertices.resize(n);
  for (auto& v : mesh.vertices) is >> v.x >> v.y;

  is >> tag >> n;
  if (tag != "triangles") throw ConfigError("read_mesh: expected 'triangles'");
  mesh.triangles.resize(n);
  for (auto& t : mesh.triangles) is >> t[0] >> t[1] >> t[2];

  is >> tag >> n;
  if (tag != "boundary_edges")
    throw ConfigError("read_mesh: expected 'boundary_edges'");
  mesh.boundary_edges.resize(n);
  for (auto& e : mesh.boundary_edges) is >> e.a >> e.b >> e.t_a >> e.t_b;

  if (!is) throw ConfigError("read_mesh: truncated file");

  const auto e2t = detail::edge_to_triangles(mesh);
  for (auto& e : mesh.boundary_edges) {
    const auto& owners = e2t.at(detail::edge_key(e.a, e.b));
    if (owners.size() != 1)
      throw ConfigError("read_mesh: edge not on the boundary");
    e.tri = owners.front();
  }
  mesh.h = mesh.compute_h();
  return mesh;
}

}  // namespace pefem

#endif  // PEFEM_MESH_HPP
