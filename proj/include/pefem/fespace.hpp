/// \file fespace.hpp
/// \brief Continuous Lagrange spaces of degree 1..3 on a triangulation.
///
/// Basis evaluation maps the physical point through the inverse affine map
/// of the chosen element and evaluates the reference Lagrange polynomials
/// there. The reference point is allowed to fall outside the reference
/// triangle: the values are then the unique polynomial continuation of the
/// element shape functions, which is exactly the extension the boundary
/// correction needs.

#ifndef PEFEM_FESPACE_HPP
#define PEFEM_FESPACE_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "pefem/errors.hpp"
#include "pefem/mesh.hpp"
#include "pefem/vec.hpp"

namespace pefem {

class FeSpace {
 public:
  FeSpace(const PolygonalMesh& mesh, int degree)
      : mesh_(&mesh), degree_(degree) {
    if (degree < 1 || degree > 3)
      throw ConfigError("FeSpace: degree must be 1, 2, or 3");
    build_reference();
    build_dof_map();
    build_element_maps();
  }

  int degree() const { return degree_; }
  int n_dofs() const { return n_dofs_; }
  int local_dofs() const { return n_local_; }
  const PolygonalMesh& mesh() const { return *mesh_; }

  const std::vector<int>& element_dofs(int elem) const {
    return elem_dofs_[elem];
  }
  Vec2 dof_point(int dof) const { return dof_points_[dof]; }

  /// Reference coordinates of physical x under element elem's affine map.
  Vec2 to_reference(int elem, Vec2 x) const {
    const auto& m = maps_[elem];
    const Vec2 d = x - m.origin;
    return {m.inv[0][0] * d.x + m.inv[0][1] * d.y,
            m.inv[1][0] * d.x + m.inv[1][1] * d.y};
  }

  double jacobian(int elem) const { return maps_[elem].det; }

  /// All local basis values at physical x, from elem's polynomial
  /// (extrapolation permitted).
  void eval_basis(int elem, Vec2 x, std::vector<double>& values) const {
    const Vec2 r = to_reference(elem, x);
    values.resize(n_local_);
    shape_values(degree_, 1.0 - r.x - r.y, r.x, r.y, values.data());
  }

  /// Basis values and physical gradients at x from elem's polynomial.
  void eval_basis_grad(int elem, Vec2 x, std::vector<double>& values,
                       std::vector<Vec2>& grads) const {
    const Vec2 r = to_reference(elem, x);
    values.resize(n_local_);
    shape_values(degree_, 1.0 - r.x - r.y, r.x, r.y, values.data());

    std::vector<double> d0(n_local_), d1(n_local_), d2(n_local_);
    shape_partials(degree_, 1.0 - r.x - r.y, r.x, r.y, d0.data(), d1.data(),
                   d2.data());
    const auto& mp = maps_[elem];
    grads.resize(n_local_);
    for (int j = 0; j < n_local_; ++j) {
      // reference gradient wrt (l1, l2) with l0 = 1 - l1 - l2
      const Vec2 rg{d1[j] - d0[j], d2[j] - d0[j]};
      // chain rule with the inverse map: grad_x = inv^T grad_ref
      grads[j] = {mp.inv[0][0] * rg.x + mp.inv[1][0] * rg.y,
                  mp.inv[0][1] * rg.x + mp.inv[1][1] * rg.y};
    }
  }

  /// Value of the FE function with the given coefficients, evaluated from
  /// elem's polynomial at x.
  double eval(int elem, Vec2 x, const std::vector<double>& coeffs) const {
    std::vector<double> vals;
    eval_basis(elem, x, vals);
    const auto& dofs = elem_dofs_[elem];
    double s = 0.0;
    for (int j = 0; j < n_local_; ++j) s += coeffs[dofs[j]] * vals[j];
    return s;
  }

  Vec2 eval_grad(int elem, Vec2 x, const std::vector<double>& coeffs) const {
    std::vector<double> vals;
    std::vector<Vec2> grads;
    eval_basis_grad(elem, x, vals, grads);
    const auto& dofs = elem_dofs_[elem];
    Vec2 g{0, 0};
    for (int j = 0; j < n_local_; ++j) g += grads[j] * coeffs[dofs[j]];
    return g;
  }

  /// Nodal interpolant: coefficients are the field values at Lagrange nodes.
  std::vector<double> interpolate(
      const std::function<double(Vec2)>& v) const {
    std::vector<double> c(n_dofs_);
    for (int i = 0; i < n_dofs_; ++i) c[i] = v(dof_points_[i]);
    return c;
  }

 private:
  struct AffineMap {
    Vec2 origin;
    double A[2][2];
    double inv[2][2];
    double det;
  };

  /// Closed-form Lagrange bases in barycentric coordinates. Node order:
  /// vertices, then edge nodes along each local edge (v0v1, v1v2, v2v0),
  /// then the interior node for cubic.
  static void shape_values(int k, double l0, double l1, double l2,
                           double* out) {
    if (k == 1) {
      out[0] = l0;
      out[1] = l1;
      out[2] = l2;
      return;
    }
    if (k == 2) {
      out[0] = l0 * (2.0 * l0 - 1.0);
      out[1] = l1 * (2.0 * l1 - 1.0);
      out[2] = l2 * (2.0 * l2 - 1.0);
      out[3] = 4.0 * l0 * l1;
      out[4] = 4.0 * l1 * l2;
      out[5] = 4.0 * l2 * l0;
      return;
    }
    const double c = 4.5;
    out[0] = 0.5 * l0 * (3.0 * l0 - 1.0) * (3.0 * l0 - 2.0);
    out[1] = 0.5 * l1 * (3.0 * l1 - 1.0) * (3.0 * l1 - 2.0);
    out[2] = 0.5 * l2 * (3.0 * l2 - 1.0) * (3.0 * l2 - 2.0);
    out[3] = c * l0 * l1 * (3.0 * l0 - 1.0);  // edge v0v1, nearer v0
    out[4] = c * l0 * l1 * (3.0 * l1 - 1.0);  // edge v0v1, nearer v1
    out[5] = c * l1 * l2 * (3.0 * l1 - 1.0);
    out[6] = c * l1 * l2 * (3.0 * l2 - 1.0);
    out[7] = c * l2 * l0 * (3.0 * l2 - 1.0);
    out[8] = c * l2 * l0 * (3.0 * l0 - 1.0);
    out[9] = 27.0 * l0 * l1 * l2;
  }

  /// Partials of the shape functions wrt each barycentric coordinate.
  static void shape_partials(int k, double l0, double l1, double l2,
                             double* d0, double* d1, double* d2) {
    const int n = (k + 1) * (k + 2) / 2;
    std::fill(d0, d0 + n, 0.0);
    std::fill(d1, d1 + n, 0.0);
    std::fill(d2, d2 + n, 0.0);
    if (k == 1) {
      d0[0] = 1.0;
      d1[1] = 1.0;
      d2[2] = 1.0;
      return;
    }
    if (k == 2) {
      d0[0] = 4.0 * l0 - 1.0;
      d1[1] = 4.0 * l1 - 1.0;
      d2[2] = 4.0 * l2 - 1.0;
      d0[3] = 4.0 * l1;
      d1[3] = 4.0 * l0;
      d1[4] = 4.0 * l2;
      d2[4] = 4.0 * l1;
      d2[5] = 4.0 * l0;
      d0[5] = 4.0 * l2;
      return;
    }
    auto dvert = [](double l) {
      return 0.5 * (27.0 * l * l - 18.0 * l + 2.0);
    };
    const double c = 4.5;
    d0[0] = dvert(l0);
    d1[1] = dvert(l1);
    d2[2] = dvert(l2);
    // c * la * lb * (3 la - 1): d/dla = c lb (6 la - 1), d/dlb = c la (3 la - 1)
    d0[3] = c * l1 * (6.0 * l0 - 1.0);
    d1[3] = c * l0 * (3.0 * l0 - 1.0);
    d1[4] = c * l0 * (6.0 * l1 - 1.0);
    d0[4] = c * l1 * (3.0 * l1 - 1.0);
    d1[5] = c * l2 * (6.0 * l1 - 1.0);
    d2[5] = c * l1 * (3.0 * l1 - 1.0);
    d2[6] = c * l1 * (6.0 * l2 - 1.0);
    d1[6] = c * l2 * (3.0 * l2 - 1.0);
    d2[7] = c * l0 * (6.0 * l2 - 1.0);
    d0[7] = c * l2 * (3.0 * l2 - 1.0);
    d0[8] = c * l2 * (6.0 * l0 - 1.0);
    d2[8] = c * l0 * (3.0 * l0 - 1.0);
    d0[9] = 27.0 * l1 * l2;
    d1[9] = 27.0 * l0 * l2;
    d2[9] = 27.0 * l0 * l1;
  }

  void build_reference() { n_local_ = (degree_ + 1) * (degree_ + 2) / 2; }

  void build_dof_map() {
    const int k = degree_;
    const int V = mesh_->n_vertices();
    const int T = mesh_->n_triangles();
    const int per_edge = k - 1;
    const int n_int = (k - 1) * (k - 2) / 2;

    std::map<std::uint64_t, int> edge_ids;
    for (int t = 0; t < T; ++t) {
      const auto& c = mesh_->triangles[t];
      for (int i = 0; i < 3; ++i) {
        const auto key = detail::edge_key(c[i], c[(i + 1) % 3]);
        if (!edge_ids.count(key))
          edge_ids[key] = static_cast<int>(edge_ids.size());
      }
    }
    const int E = static_cast<int>(edge_ids.size());
    n_dofs_ = V + E * per_edge + T * n_int;

    dof_points_.assign(n_dofs_, Vec2{});
    for (int vtx = 0; vtx < V; ++vtx) dof_points_[vtx] = mesh_->vertices[vtx];

    elem_dofs_.assign(T, {});
    for (int t = 0; t < T; ++t) {
      const auto& c = mesh_->triangles[t];
      auto& dofs = elem_dofs_[t];
      dofs.resize(n_local_);
      dofs[0] = c[0];
      dofs[1] = c[1];
      dofs[2] = c[2];
      int local = 3;
      for (int e = 0; e < 3; ++e) {
        const int ga = c[e], gb = c[(e + 1) % 3];
        const int eid = edge_ids.at(detail::edge_key(ga, gb));
        for (int i = 1; i < k; ++i) {
          // slot along the canonical (low id -> high id) direction
          const int slot = ga < gb ? i - 1 : per_edge - i;
          const int dof = V + eid * per_edge + slot;
          dofs[local++] = dof;
          const Vec2 pa = mesh_->vertices[ga], pb = mesh_->vertices[gb];
          dof_points_[dof] = pa + (pb - pa) * (static_cast<double>(i) / k);
        }
      }
      if (n_int == 1) {
        const int dof = V + E * per_edge + t;
        dofs[local++] = dof;
        const auto p = mesh_->tri_coords(t);
        dof_points_[dof] = (p[0] + p[1] + p[2]) / 3.0;
      }
    }
  }

  void build_element_maps() {
    const double h2 = mesh_->h * mesh_->h;
    maps_.resize(mesh_->n_triangles());
    for (int t = 0; t < mesh_->n_triangles(); ++t) {
      const auto p = mesh_->tri_coords(t);
      AffineMap& m = maps_[t];
      m.origin = p[0];
      m.A[0][0] = p[1].x - p[0].x;
      m.A[0][1] = p[2].x - p[0].x;
      m.A[1][0] = p[1].y - p[0].y;
      m.A[1][1] = p[2].y - p[0].y;
      m.det = m.A[0][0] * m.A[1][1] - m.A[0][1] * m.A[1][0];
      if (std::abs(m.det) < 1e-14 * h2)
        throw SingularElement("element " + std::to_string(t) +
                              " has a singular affine map");
      m.inv[0][0] = m.A[1][1] / m.det;
      m.inv[0][1] = -m.A[0][1] / m.det;
      m.inv[1][0] = -m.A[1][0] / m.det;
      m.inv[1][1] = m.A[0][0] / m.det;
    }
  }

  const PolygonalMesh* mesh_;
  int degree_;
  int n_local_ = 0;
  int n_dofs_ = 0;
  std::vector<std::vector<int>> elem_dofs_;
  std::vector<Vec2> dof_points_;
  std::vector<AffineMap> maps_;
};

}  // namespace pefem

#endif  // PEFEM_FESPACE_HPP
