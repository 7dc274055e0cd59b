/// \file taylor.hpp
/// \brief Truncated Taylor operators for smooth fields, the analytic field
///        catalog, and empirical rate checks for the extension estimates.
///
/// For an FE function the degree-(k-1) Taylor expansion of its element
/// polynomial is the polynomial itself, so the solver side never builds
/// these operators explicitly; they exist to measure the rates the method
/// relies on: the boundary discrepancy of the truncated expansion decays
/// like delta_h^(k+1-m), and the order-band of an FE function is controlled
/// by (delta_h/h) through the inverse inequality.

#ifndef PEFEM_TAYLOR_HPP
#define PEFEM_TAYLOR_HPP

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "pefem/boundary.hpp"
#include "pefem/errors.hpp"
#include "pefem/fespace.hpp"
#include "pefem/geometry.hpp"
#include "pefem/mesh.hpp"
#include "pefem/numerics.hpp"
#include "pefem/quadrature.hpp"
#include "pefem/vec.hpp"

namespace pefem {

/// Analytic scalar field with closed-form partial derivatives.
struct SmoothField {
  std::string name;
  int smoothness = 99;  ///< highest certified derivative order (99: analytic)
  /// D^(ax,ay) v at (x, y)
  std::function<double(int ax, int ay, double x, double y)> deriv;

  double operator()(Vec2 p) const { return deriv(0, 0, p.x, p.y); }
  double value(Vec2 p) const { return deriv(0, 0, p.x, p.y); }
  Vec2 grad(Vec2 p) const {
    return {deriv(1, 0, p.x, p.y), deriv(0, 1, p.x, p.y)};
  }

  /// W^m_infinity seminorm over a bounding box, by dense sampling.
  double seminorm_winf(int m, Vec2 lo, Vec2 hi, int samples = 64) const {
    double s = 0.0;
    for (int i = 0; i <= samples; ++i)
      for (int j = 0; j <= samples; ++j) {
        const double x = lo.x + (hi.x - lo.x) * i / samples;
        const double y = lo.y + (hi.y - lo.y) * j / samples;
        for (int a = 0; a <= m; ++a)
          s = std::max(s, std::abs(deriv(a, m - a, x, y)));
      }
    return s;
  }
};

/// The partial-derivative field D^(ax,ay) v.
inline SmoothField derivative(const SmoothField& v, int ax, int ay) {
  SmoothField d;
  d.name = "D(" + std::to_string(ax) + "," + std::to_string(ay) + ")" + v.name;
  d.smoothness = v.smoothness;
  d.deriv = [base = v.deriv, ax, ay](int a, int b, double x, double y) {
    return base(a + ax, b + ay, x, y);
  };
  return d;
}

namespace fields {

inline SmoothField constant(double c) {
  SmoothField f;
  f.name = "constant";
  f.deriv = [c](int a, int b, double, double) {
    return (a == 0 && b == 0) ? c : 0.0;
  };
  return f;
}

/// exp(x) sin(y); all derivatives are exp(x) sin(y + b*pi/2).
inline SmoothField exp_sin() {
  SmoothField f;
  f.name = "exp_sin";
  f.deriv = [](int, int b, double x, double y) {
    constexpr double half_pi = 1.5707963267948966;
    return std::exp(x) * std::sin(y + b * half_pi);
  };
  return f;
}

/// cos(pi x) cosh(y).
inline SmoothField trig_cosh() {
  SmoothField f;
  f.name = "trig_cosh";
  f.deriv = [](int a, int b, double x, double y) {
    constexpr double pi = 3.14159265358979323846;
    const double xpart = std::pow(pi, a) * std::cos(pi * x + a * pi / 2.0);
    const double ypart = (b % 2 == 0) ? std::cosh(y) : std::sinh(y);
    return xpart * ypart;
  };
  return f;
}

struct Monomial {
  double c;
  int ax, ay;
};

inline SmoothField polynomial(std::string name, std::vector<Monomial> terms) {
  SmoothField f;
  f.name = std::move(name);
  f.deriv = [terms = std::move(terms)](int a, int b, double x, double y) {
    double s = 0.0;
    for (const auto& t : terms) {
      if (t.ax < a || t.ay < b) continue;
      double c = t.c;
      for (int i = 0; i < a; ++i) c *= (t.ax - i);
      for (int i = 0; i < b; ++i) c *= (t.ay - i);
      s += c * std::pow(x, t.ax - a) * std::pow(y, t.ay - b);
    }
    return s;
  };
  return f;
}

}  // namespace fields

/// Truncated Taylor expansion of v about `center`, evaluated at `target`:
/// sum over |alpha| <= k of D^alpha v(center) (target-center)^alpha / alpha!.
inline double taylor_eval(const SmoothField& v, Vec2 center, Vec2 target,
                          int k) {
  const Vec2 d = target - center;
  double s = 0.0;
  for (int order = 0; order <= k; ++order) {
    for (int a = order; a >= 0; --a) {
      const int b = order - a;
      double fact = 1.0;
      for (int i = 2; i <= a; ++i) fact *= i;
      for (int i = 2; i <= b; ++i) fact *= i;
      s += v.deriv(a, b, center.x, center.y) * std::pow(d.x, a) *
           std::pow(d.y, b) / fact;
    }
  }
  return s;
}

/// Partial sum keeping only the orders k_lo..k_hi.
inline double taylor_band(const SmoothField& v, Vec2 center, Vec2 target,
                          int k_lo, int k_hi) {
  const Vec2 d = target - center;
  double s = 0.0;
  for (int order = k_lo; order <= k_hi; ++order) {
    for (int a = order; a >= 0; --a) {
      const int b = order - a;
      double fact = 1.0;
      for (int i = 2; i <= a; ++i) fact *= i;
      for (int i = 2; i <= b; ++i) fact *= i;
      s += v.deriv(a, b, center.x, center.y) * std::pow(d.x, a) *
           std::pow(d.y, b) / fact;
    }
  }
  return s;
}

struct RateSample {
  int level = 0;
  double h = 0.0;
  double delta_h = 0.0;
  double discrepancy = 0.0;
};

struct RateCheck {
  std::vector<RateSample> samples;
  double fitted_order = 0.0;  ///< slope of log(discrepancy) vs log(delta_h)
  bool exact = false;         ///< all discrepancies at rounding level
};

/// Measure the W^m_infinity boundary discrepancy of the order-k Taylor
/// expansion centered at facet points, against the field itself at the
/// projected points. Expected decay: delta_h^(k+1-m).
inline RateCheck lemma2_rate_check(const SmoothField& v,
                                   const CurvedDomain& domain,
                                   const std::vector<PolygonalMesh>& meshes,
                                   int k, int m) {
  if (m != 0 && m != 1)
    throw ConfigError("lemma2_rate_check: m must be 0 or 1");
  const auto rule = make_quadrature(QuadKind::segment, 2 * k + 2);
  const SmoothField dvx = derivative(v, 1, 0);
  const SmoothField dvy = derivative(v, 0, 1);

  RateCheck check;
  for (const auto& mesh : meshes) {
    double disc = 0.0;
    for (const auto& qp : boundary_quadrature(mesh, domain, rule)) {
      const Vec2 xi = qp.xi, eta = qp.trace.eta;
      if (m == 0) {
        disc = std::max(disc,
                        std::abs(taylor_eval(v, xi, eta, k) - v.value(eta)));
      } else {
        // first derivatives of the expansion are the order-(k-1)
        // expansions of the derivatives
        disc = std::max(
            disc, std::abs(taylor_eval(dvx, xi, eta, k - 1) - dvx.value(eta)));
        disc = std::max(
            disc, std::abs(taylor_eval(dvy, xi, eta, k - 1) - dvy.value(eta)));
      }
    }
    check.samples.push_back({mesh.level, mesh.h, mesh.delta_h, disc});
  }

  std::vector<double> deltas, discs;
  bool all_tiny = true;
  for (const auto& s : check.samples) {
    if (s.discrepancy > 1e-12) all_tiny = false;
    if (s.discrepancy > 1e-14) {  // above the rounding floor
      deltas.push_back(s.delta_h);
      discs.push_back(s.discrepancy);
    }
  }
  if (all_tiny) {
    check.exact = true;
    return check;
  }
  if (deltas.size() < 4)
    throw InsufficientResolution(
        "lemma2_rate_check: only " + std::to_string(deltas.size()) +
        " usable levels above the 1e-14 floor");
  check.fitted_order = fit_log_slope(deltas, discs, 4);
  return check;
}

struct StabilitySample {
  int level = 0;
  double h = 0.0;
  double delta_h = 0.0;
  double excess = 0.0;  ///< max(0, sup_boundary |T^k v| / sup |v| - 1)
};

/// Stability of the extension: the expanded values at projected boundary
/// points may exceed sup |v| only by O(delta_h).
inline std::vector<StabilitySample> lemma1_stability_sweep(
    const SmoothField& v, const CurvedDomain& domain,
    const std::vector<PolygonalMesh>& meshes, int k) {
  const auto seg = make_quadrature(QuadKind::segment, 2 * k + 2);
  const auto tri = make_quadrature(QuadKind::triangle, 6);
  std::vector<StabilitySample> out;
  for (const auto& mesh : meshes) {
    double val = 0.0;
    double sup = 0.0;
    for (const auto& qp : boundary_quadrature(mesh, domain, seg)) {
      val = std::max(val, std::abs(taylor_eval(v, qp.xi, qp.trace.eta, k)));
      // facet points belong to the closure of the polygonal domain, where
      // the sup is often attained
      sup = std::max(sup, std::abs(v.value(qp.xi)));
    }
    for (const Vec2& p : mesh.vertices) sup = std::max(sup, std::abs(v.value(p)));
    for (int t = 0; t < mesh.n_triangles(); ++t) {
      const auto c = mesh.tri_coords(t);
      for (std::size_t q = 0; q < tri.size(); ++q) {
        const Vec2 x = c[0] * tri.bary[q][0] + c[1] * tri.bary[q][1] +
                       c[2] * tri.bary[q][2];
        sup = std::max(sup, std::abs(v.value(x)));
      }
    }
    out.push_back(
        {mesh.level, mesh.h, mesh.delta_h, std::max(0.0, val / sup - 1.0)});
  }
  return out;
}

struct InverseSample {
  int level = 0;
  double h = 0.0;
  double delta_h = 0.0;
  double ratio = 0.0;  ///< sup |band| * h / (delta_h * sup |v_h|)
};

/// Inverse-inequality scaling of the extension band of FE interpolants:
/// the orders 1..k of the owner polynomial expanded from the facet to the
/// projected point are bounded by (delta_h/h) sup |v_h|.
inline std::vector<InverseSample> lemma3_inverse_sweep(
    const SmoothField& v, const CurvedDomain& domain,
    const std::vector<PolygonalMesh>& meshes, int k) {
  const auto seg = make_quadrature(QuadKind::segment, 2 * k + 2);
  std::vector<InverseSample> out;
  for (const auto& mesh : meshes) {
    const FeSpace space(mesh, k);
    const auto coeffs =
        space.interpolate([&](Vec2 p) { return v.value(p); });
    double band = 0.0;
    for (const auto& qp : boundary_quadrature(mesh, domain, seg)) {
      // full-band difference of the owner polynomial: orders 1..k
      const double diff = space.eval(qp.owner, qp.trace.eta, coeffs) -
                          space.eval(qp.owner, qp.xi, coeffs);
      band = std::max(band, std::abs(diff));
    }
    double sup = 0.0;
    for (double c : coeffs) sup = std::max(sup, std::abs(c));
    out.push_back({mesh.level, mesh.h, mesh.delta_h,
                   band * mesh.h / (mesh.delta_h * sup)});
  }
  return out;
}

}  // namespace pefem

#endif  // PEFEM_TAYLOR_HPP
