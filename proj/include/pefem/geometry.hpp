/// \file geometry.hpp
/// \brief Exact smooth domains, closest-point projection onto the boundary
///        curve, exact normals, and chord-gap measurement.
///
/// The domain boundary is a closed regular parametric curve gamma(t),
/// t in [0,1). The projection eta(x) maps a point near the boundary to its
/// closest point on the curve; the offset eta(x) - x is normal to the curve
/// at the projected point, which is what makes the chord gap the right
/// per-edge contribution to the global boundary gap.

#ifndef PEFEM_GEOMETRY_HPP
#define PEFEM_GEOMETRY_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pefem/errors.hpp"
#include "pefem/vec.hpp"

namespace pefem {

/// Exact smooth domain with an analytic closed boundary curve.
/// Immutable after construction; all member queries are pure.
class CurvedDomain {
 public:
  using CurveFn = std::function<Vec2(double)>;
  using InsideFn = std::function<bool(Vec2)>;

  CurvedDomain(std::string name, CurveFn gamma, CurveFn dgamma, CurveFn ddgamma,
               InsideFn inside, Vec2 centroid, double exact_area)
      : name_(std::move(name)),
        gamma_(std::move(gamma)),
        dgamma_(std::move(dgamma)),
        ddgamma_(std::move(ddgamma)),
        inside_(std::move(inside)),
        centroid_(centroid),
        area_(exact_area) {
    build_tables();
  }

  const std::string& name() const { return name_; }
  Vec2 gamma(double t) const { return gamma_(wrap(t)); }
  Vec2 dgamma(double t) const { return dgamma_(wrap(t)); }
  Vec2 ddgamma(double t) const { return ddgamma_(wrap(t)); }
  bool inside(Vec2 p) const { return inside_(p); }
  Vec2 centroid() const { return centroid_; }
  double area() const { return area_; }

  /// Minimal distance from the centroid to the boundary (sampled).
  double inradius() const { return inradius_; }
  double perimeter() const { return perimeter_; }

  /// Arclength from gamma(0) to gamma(t), t in [0,1].
  double arclength(double t) const {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return perimeter_;
    const double ft = t * kTableSize;
    const std::size_t i = std::min<std::size_t>(
        static_cast<std::size_t>(ft), kTableSize - 1);
    const double t0 = static_cast<double>(i) / kTableSize;
    return cum_arc_[i] + segment_arc(t0, t);
  }

  /// Inverse arclength: parameter t with arclength(t) = s.
  double param_at_arclength(double s) const {
    s = std::fmod(s, perimeter_);
    if (s < 0.0) s += perimeter_;
    // bracket from the table, then Newton on arclength(t) - s
    const auto it = std::upper_bound(cum_arc_.begin(), cum_arc_.end(), s);
    std::size_t i = static_cast<std::size_t>(it - cum_arc_.begin());
    if (i > 0) --i;
    double t = (static_cast<double>(i) + 0.5) / kTableSize;
    for (int iter = 0; iter < 30; ++iter) {
      const double f = arclength(t) - s;
      const double df = dgamma_(wrap(t)).norm();
      const double step = f / df;
      t -= step;
      t = std::clamp(t, 0.0, 1.0);
      if (std::abs(step) < 1e-15) break;
    }
    return wrap(t);
  }

  static double wrap(double t) {
    t = std::fmod(t, 1.0);
    return t < 0.0 ? t + 1.0 : t;
  }

  // --- catalog -------------------------------------------------------------

  static CurvedDomain unit_disk() {
    constexpr double tau = 6.283185307179586476925286766559;
    return CurvedDomain(
        "disk",
        [](double t) { return Vec2{std::cos(tau * t), std::sin(tau * t)}; },
        [](double t) {
          return Vec2{-tau * std::sin(tau * t), tau * std::cos(tau * t)};
        },
        [](double t) {
          return Vec2{-tau * tau * std::cos(tau * t),
                      -tau * tau * std::sin(tau * t)};
        },
        [](Vec2 p) { return p.squared_norm() < 1.0; }, Vec2{0, 0},
        3.14159265358979323846);
  }

  static CurvedDomain ellipse(double a = 1.5, double b = 1.0) {
    constexpr double tau = 6.283185307179586476925286766559;
    return CurvedDomain(
        "ellipse",
        [a, b](double t) {
          return Vec2{a * std::cos(tau * t), b * std::sin(tau * t)};
        },
        [a, b](double t) {
          return Vec2{-a * tau * std::sin(tau * t), b * tau * std::cos(tau * t)};
        },
        [a, b](double t) {
          return Vec2{-a * tau * tau * std::cos(tau * t),
                      -b * tau * tau * std::sin(tau * t)};
        },
        [a, b](Vec2 p) {
          return (p.x / a) * (p.x / a) + (p.y / b) * (p.y / b) < 1.0;
        },
        Vec2{0, 0}, 3.14159265358979323846 * a * b);
  }

  /// Smooth star r(theta) = 1 + amp*cos(lobes*theta).
  static CurvedDomain star(double amp = 0.2, int lobes = 5) {
    constexpr double tau = 6.283185307179586476925286766559;
    const double L = static_cast<double>(lobes);
    auto r = [amp, L](double th) { return 1.0 + amp * std::cos(L * th); };
    auto dr = [amp, L](double th) { return -amp * L * std::sin(L * th); };
    auto ddr = [amp, L](double th) { return -amp * L * L * std::cos(L * th); };
    return CurvedDomain(
        "star",
        [r](double t) {
          const double th = tau * t;
          return Vec2{r(th) * std::cos(th), r(th) * std::sin(th)};
        },
        [r, dr](double t) {
          const double th = tau * t;
          const double c = std::cos(th), s = std::sin(th);
          return Vec2{tau * (dr(th) * c - r(th) * s),
                      tau * (dr(th) * s + r(th) * c)};
        },
        [r, dr, ddr](double t) {
          const double th = tau * t;
          const double c = std::cos(th), s = std::sin(th);
          const double rr = r(th), r1 = dr(th), r2 = ddr(th);
          return Vec2{tau * tau * ((r2 - rr) * c - 2.0 * r1 * s),
                      tau * tau * ((r2 - rr) * s + 2.0 * r1 * c)};
        },
        [amp, L](Vec2 p) {
          const double th = std::atan2(p.y, p.x);
          const double rb = 1.0 + amp * std::cos(L * th);
          return p.norm() < rb;
        },
        Vec2{0, 0},
        3.14159265358979323846 * (1.0 + 0.5 * amp * amp));
  }

  /// Catalog lookup used by the run configuration.
  static CurvedDomain by_name(const std::string& name,
                              const std::vector<double>& params = {}) {
    if (name == "disk") return unit_disk();
    if (name == "ellipse") {
      if (params.size() >= 2) return ellipse(params[0], params[1]);
      return ellipse();
    }
    if (name == "star") {
      if (params.size() >= 2)
        return star(params[0], static_cast<int>(params[1]));
      return star();
    }
    throw ConfigError("unknown domain '" + name +
                      "' (catalog: disk, ellipse, star)");
  }

 private:
  static constexpr std::size_t kTableSize = 4096;

  void build_tables() {
    cum_arc_.assign(kTableSize + 1, 0.0);
    for (std::size_t i = 0; i < kTableSize; ++i) {
      const double t0 = static_cast<double>(i) / kTableSize;
      const double t1 = static_cast<double>(i + 1) / kTableSize;
      cum_arc_[i + 1] = cum_arc_[i] + segment_arc(t0, t1);
    }
    perimeter_ = cum_arc_.back();
    inradius_ = 1e300;
    for (std::size_t i = 0; i < kTableSize; ++i) {
      const double t = static_cast<double>(i) / kTableSize;
      inradius_ = std::min(inradius_, (gamma_(t) - centroid_).norm());
    }
  }

  /// Composite Simpson arclength of gamma over [t0, t1] (short interval).
  double segment_arc(double t0, double t1) const {
    const double m = 0.5 * (t0 + t1);
    const double f0 = dgamma_(wrap(t0)).norm();
    const double fm = dgamma_(wrap(m)).norm();
    const double f1 = dgamma_(wrap(t1)).norm();
    return (t1 - t0) * (f0 + 4.0 * fm + f1) / 6.0;
  }

  std::string name_;
  CurveFn gamma_, dgamma_, ddgamma_;
  InsideFn inside_;
  Vec2 centroid_;
  double area_ = 0.0;
  double inradius_ = 0.0;
  double perimeter_ = 0.0;
  std::vector<double> cum_arc_;
};

/// Result of projecting a facet point xi onto the exact boundary.
struct BoundaryTrace {
  Vec2 xi;                     ///< source point (on the polygonal boundary)
  Vec2 eta;                    ///< closest point on the exact curve
  double t = 0.0;              ///< curve parameter of eta
  Vec2 n;                      ///< exact outward unit normal at eta
  std::optional<Vec2> n_h;     ///< facet unit normal, when facet context given
  Vec2 d;                      ///< offset eta - xi
  double dist = 0.0;           ///< |d|
};

/// Outward unit normal at gamma(t). The tangent is rotated so the result
/// points away from the inside-test region.
inline Vec2 exact_normal(const CurvedDomain& domain, double t) {
  const Vec2 tan = domain.dgamma(t).normalized();
  Vec2 n = tan.perp_cw();  // outward for a CCW parametrization
  const double eps = 1e-4 * domain.inradius();
  if (domain.inside(domain.gamma(t) + n * eps)) n = -n;
  return n;
}

/// Outward unit normal of the straight facet a -> b (CCW boundary ordering).
inline Vec2 facet_normal(Vec2 a, Vec2 b) {
  return (b - a).perp_cw().normalized();
}

namespace detail {

struct ProjectionCandidate {
  double t = 0.0;
  double dist2 = 0.0;
};

/// Minimize |gamma(t)-x|^2 over [lo, hi] (unwrapped parameters): golden
/// section to localize the basin, then Newton on the optimality equation
/// g(t) = (gamma(t)-x).gamma'(t) to polish. Near concave arcs the distance
/// function can have several stationary points; the golden stage keeps the
/// iterate inside one basin.
inline ProjectionCandidate refine_projection(const CurvedDomain& dom, Vec2 x,
                                             double lo, double hi) {
  auto d2 = [&](double t) { return (dom.gamma(t) - x).squared_norm(); };
  auto g = [&](double t) { return (dom.gamma(t) - x).dot(dom.dgamma(t)); };
  auto dg = [&](double t) {
    const Vec2 d1 = dom.dgamma(t);
    return d1.squared_norm() + (dom.gamma(t) - x).dot(dom.ddgamma(t));
  };

  constexpr double kInvPhi = 0.61803398874989484820;
  double a = lo, b = hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = d2(x1), f2 = d2(x2);
  for (int iter = 0; iter < 40; ++iter) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = d2(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = d2(x2);
    }
  }
  double t = 0.5 * (a + b);

  double gt = g(t);
  for (int iter = 0; iter < 50 && std::abs(gt) > 1e-12; ++iter) {
    const double slope = dg(t);
    if (slope == 0.0) break;
    double tn = t - gt / slope;
    tn = std::clamp(tn, lo, hi);
    if (tn == t) break;
    t = tn;
    gt = g(t);
  }
  if (std::abs(gt) > 1e-12)
    throw NoConvergence("closest_point: Newton residual " +
                        std::to_string(gt) + " after 50 iterations");
  return {CurvedDomain::wrap(t), (dom.gamma(t) - x).squared_norm()};
}

}  // namespace detail

/// Closest-point projection of x onto the exact boundary. Seeds Newton from a
/// 256-point coarse sweep; throws AmbiguousProjection when two sweep minima
/// are equidistant (within 1e-10) but more than 0.01 apart in parameter.
inline BoundaryTrace closest_point(const CurvedDomain& domain, Vec2 x) {
  constexpr int kSweep = 256;
  double d2[kSweep];
  for (int j = 0; j < kSweep; ++j)
    d2[j] = (domain.gamma(static_cast<double>(j) / kSweep) - x).squared_norm();

  // cyclic local minima of the sampled squared distance
  std::vector<int> minima;
  for (int j = 0; j < kSweep; ++j) {
    const double prev = d2[(j + kSweep - 1) % kSweep];
    const double next = d2[(j + 1) % kSweep];
    if (d2[j] <= prev && d2[j] <= next) minima.push_back(j);
  }
  std::sort(minima.begin(), minima.end(),
            [&](int a, int b) { return d2[a] < d2[b]; });
  if (minima.size() > 3) minima.resize(3);

  std::vector<detail::ProjectionCandidate> cands;
  for (int j : minima) {
    const double tj = static_cast<double>(j) / kSweep;
    cands.push_back(detail::refine_projection(domain, x, tj - 1.0 / kSweep,
                                              tj + 1.0 / kSweep));
  }
  std::sort(cands.begin(), cands.end(),
            [](const auto& a, const auto& b) { return a.dist2 < b.dist2; });

  if (cands.size() >= 2) {
    const double da = std::sqrt(cands[0].dist2);
    const double db = std::sqrt(cands[1].dist2);
    double dt = std::abs(cands[0].t - cands[1].t);
    dt = std::min(dt, 1.0 - dt);
    if (db - da < 1e-10 && dt > 0.01)
      throw AmbiguousProjection(
          "closest_point: two projections at parameter distance " +
          std::to_string(dt) + " are equidistant");
  }

  BoundaryTrace tr;
  tr.xi = x;
  tr.t = cands.front().t;
  tr.eta = domain.gamma(tr.t);
  tr.n = exact_normal(domain, tr.t);
  tr.d = tr.eta - x;
  tr.dist = tr.d.norm();
  return tr;
}

/// Projection with facet context: also records the facet unit normal.
inline BoundaryTrace closest_point(const CurvedDomain& domain, Vec2 x,
                                   Vec2 facet_unit_normal) {
  BoundaryTrace tr = closest_point(domain, x);
  tr.n_h = facet_unit_normal;
  return tr;
}

namespace detail {

/// Projection restricted to the parameter window [t_lo, t_lo + width]
/// (unwrapped). Used when the admissible arc is already known, e.g. for
/// points on a chord whose endpoints' parameters bracket the arc.
inline BoundaryTrace closest_point_in_window(const CurvedDomain& domain,
                                             Vec2 x, double t_lo,
                                             double width) {
  constexpr int kSamples = 33;
  double best_t = t_lo;
  double best_d2 = 1e300;
  for (int j = 0; j < kSamples; ++j) {
    const double t = t_lo + width * j / (kSamples - 1);
    const double d2 = (domain.gamma(t) - x).squared_norm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best_t = t;
    }
  }
  const double h = width / (kSamples - 1);
  const auto cand = refine_projection(domain, x, best_t - h, best_t + h);
  BoundaryTrace tr;
  tr.xi = x;
  tr.t = cand.t;
  tr.eta = domain.gamma(cand.t);
  tr.n = exact_normal(domain, cand.t);
  tr.d = tr.eta - x;
  tr.dist = tr.d.norm();
  return tr;
}

}  // namespace detail

/// Maximal gap between the chord [a, b] (endpoints on the exact boundary)
/// and the boundary arc it subtends: max over Chebyshev-spaced points xi on
/// the chord of |eta(xi) - xi|, then locally refined so the returned maximum
/// is resolved well below 1e-8.
inline double chord_gap(const CurvedDomain& domain, Vec2 a, Vec2 b) {
  const double chord = (b - a).norm();
  if (chord < 1e-14) return 0.0;

  const BoundaryTrace ta = closest_point(domain, a);
  const BoundaryTrace tb = closest_point(domain, b);
  if (ta.dist > 1e-8 || tb.dist > 1e-8)
    throw ProjectionFailure("chord_gap: endpoints are not on the boundary");

  // short-way parameter window from a to b, padded
  double w = CurvedDomain::wrap(tb.t - ta.t);
  double lo = ta.t;
  if (w > 0.5) {
    lo = tb.t;
    w = 1.0 - w;
  }
  const double pad = 0.2 * w + 1e-6;
  lo -= pad;
  w += 2.0 * pad;

  const Vec2 mid = (a + b) * 0.5;
  const Vec2 half = (b - a) * 0.5;
  auto gap_at = [&](double s) {
    const Vec2 xi = mid + half * s;
    return detail::closest_point_in_window(domain, xi, lo, w).dist;
  };

  // 33 Chebyshev points (odd count includes the chord midpoint)
  constexpr int kN = 33;
  constexpr double kPi = 3.14159265358979323846;
  double best_s = 0.0, best_gap = 0.0;
  for (int i = 0; i < kN; ++i) {
    const double s = std::cos(kPi * (2 * i + 1) / (2 * kN));
    const double g = gap_at(s);
    if (g > best_gap) {
      best_gap = g;
      best_s = s;
    }
  }

  // golden-section refinement of the sampled maximum
  const double spacing = kPi / kN;  // angular spacing bound
  double glo = std::max(-1.0, best_s - spacing);
  double ghi = std::min(1.0, best_s + spacing);
  constexpr double kInvPhi = 0.61803398874989484820;
  double x1 = ghi - kInvPhi * (ghi - glo);
  double x2 = glo + kInvPhi * (ghi - glo);
  double f1 = gap_at(x1), f2 = gap_at(x2);
  for (int iter = 0; iter < 60 && (ghi - glo) > 1e-10; ++iter) {
    if (f1 < f2) {
      glo = x1;
      x1 = x2;
      f1 = f2;
      x2 = glo + kInvPhi * (ghi - glo);
      f2 = gap_at(x2);
    } else {
      ghi = x2;
      x2 = x1;
      f2 = f1;
      x1 = ghi - kInvPhi * (ghi - glo);
      f1 = gap_at(x1);
    }
  }
  return std::max({best_gap, f1, f2});
}

}  // namespace pefem

#endif  // PEFEM_GEOMETRY_HPP
