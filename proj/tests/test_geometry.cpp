#include "pefem/geometry.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

namespace {

using pefem::BoundaryTrace;
using pefem::chord_gap;
using pefem::closest_point;
using pefem::CurvedDomain;
using pefem::Vec2;

constexpr double kPi = 3.14159265358979323846;

std::vector<CurvedDomain> catalog() {
  std::vector<CurvedDomain> v;
  v.push_back(CurvedDomain::unit_disk());
  v.push_back(CurvedDomain::ellipse());
  v.push_back(CurvedDomain::star());
  return v;
}

TEST(CurvedDomain, CurveIsClosedAndRegular) {
  for (const auto& dom : catalog()) {
    EXPECT_LT((dom.gamma(0.0) - dom.gamma(1.0 - 1e-14)).norm(), 1e-10)
        << dom.name();
    EXPECT_LT((dom.dgamma(0.0) - dom.dgamma(1.0 - 1e-14)).norm(), 1e-8)
        << dom.name();
    for (int i = 0; i < 1000; ++i) {
      const double t = i / 1000.0;
      EXPECT_GT(dom.dgamma(t).norm(), 1e-3) << dom.name() << " t=" << t;
    }
  }
}

// pairwise segment intersection check on a fine polyline sample
TEST(CurvedDomain, NotSelfIntersecting) {
  auto seg_intersect = [](Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2) {
    const Vec2 r = p2 - p1, s = q2 - q1;
    const double denom = r.cross(s);
    if (std::abs(denom) < 1e-16) return false;
    const double t = (q1 - p1).cross(s) / denom;
    const double u = (q1 - p1).cross(r) / denom;
    return t > 1e-12 && t < 1.0 - 1e-12 && u > 1e-12 && u < 1.0 - 1e-12;
  };
  constexpr int n = 400;
  for (const auto& dom : catalog()) {
    std::vector<Vec2> pts(n);
    for (int i = 0; i < n; ++i) pts[i] = dom.gamma(static_cast<double>(i) / n);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 2; j < n; ++j) {
        if (i == 0 && j == n - 1) continue;  // adjacent across the seam
        EXPECT_FALSE(seg_intersect(pts[i], pts[(i + 1) % n], pts[j],
                                   pts[(j + 1) % n]))
            << dom.name() << " segments " << i << "," << j;
      }
    }
  }
}

TEST(CurvedDomain, DiskPerimeterAndArclength) {
  const auto disk = CurvedDomain::unit_disk();
  EXPECT_NEAR(disk.perimeter(), 2.0 * kPi, 1e-10);
  EXPECT_NEAR(disk.arclength(0.25), kPi / 2.0, 1e-10);
  const double t = disk.param_at_arclength(kPi);
  EXPECT_NEAR(t, 0.5, 1e-12);
  EXPECT_NEAR(disk.inradius(), 1.0, 1e-12);
}

TEST(ClosestPoint, DiskRadialPoints) {
  const auto disk = CurvedDomain::unit_disk();
  const BoundaryTrace tr = closest_point(disk, Vec2{2.0, 0.0});
  EXPECT_NEAR(tr.eta.x, 1.0, 1e-12);
  EXPECT_NEAR(tr.eta.y, 0.0, 1e-12);
  EXPECT_NEAR(tr.t, 0.0, 1e-12);
  EXPECT_NEAR(tr.n.x, 1.0, 1e-12);
  EXPECT_NEAR(tr.n.y, 0.0, 1e-12);
  EXPECT_FALSE(tr.n_h.has_value());

  const BoundaryTrace tr2 = closest_point(disk, Vec2{0.6, 0.6});
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(tr2.eta.x, inv_sqrt2, 1e-12);
  EXPECT_NEAR(tr2.eta.y, inv_sqrt2, 1e-12);
}

// brute-force oracle: 1e6-point parameter sweep refined by bisection on the
// optimality residual
TEST(ClosestPoint, EllipseAgainstDenseSweepOracle) {
  const auto ell = CurvedDomain::ellipse();
  const Vec2 x{1.4, 0.3};

  constexpr int n = 1000000;
  int best = 0;
  double best_d2 = 1e300;
  for (int i = 0; i < n; ++i) {
    const double d2 = (ell.gamma(static_cast<double>(i) / n) - x).squared_norm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best = i;
    }
  }
  auto g = [&](double t) { return (ell.gamma(t) - x).dot(ell.dgamma(t)); };
  double lo = (best - 1.0) / n, hi = (best + 1.0) / n;
  for (int iter = 0; iter < 80; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if ((g(lo) < 0.0) == (g(mid) < 0.0))
      lo = mid;
    else
      hi = mid;
  }
  const Vec2 eta_oracle = ell.gamma(0.5 * (lo + hi));

  const BoundaryTrace tr = closest_point(ell, x);
  EXPECT_LT((tr.eta - eta_oracle).norm(), 1e-9);
  // optimality residual of the returned projection
  EXPECT_LT(std::abs((tr.eta - x).dot(ell.dgamma(tr.t))), 1e-11);
}

TEST(ClosestPoint, TraceInvariants) {
  std::mt19937 rng(1234);
  std::uniform_real_distribution<double> ut(0.0, 1.0);
  // inward reach limited by the star's concave curvature (radius ~0.15)
  std::uniform_real_distribution<double> uoff(-0.1, 0.2);
  for (const auto& dom : catalog()) {
    for (int i = 0; i < 50; ++i) {
      const double t = ut(rng);
      const Vec2 x = dom.gamma(t) + exact_normal(dom, t) * uoff(rng);
      const BoundaryTrace tr = closest_point(dom, x);
      EXPECT_LT((tr.eta - dom.gamma(tr.t)).norm(), 1e-12);
      EXPECT_NEAR(tr.n.norm(), 1.0, 1e-12);
      // d parallel to n: first-order optimality of the projection
      if (tr.dist > 1e-10)
        EXPECT_LT(std::abs(tr.d.normalized().cross(tr.n)), 1e-8)
            << dom.name();
    }
  }
}

TEST(ClosestPoint, Idempotence) {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> ut(0.0, 1.0);
  for (const auto& dom : catalog()) {
    for (int i = 0; i < 25; ++i) {
      const double t = ut(rng);
      const Vec2 x = dom.gamma(t) + exact_normal(dom, t) * 0.1;
      const BoundaryTrace tr = closest_point(dom, x);
      const BoundaryTrace tr2 = closest_point(dom, tr.eta);
      EXPECT_LT((tr2.eta - tr.eta).norm(), 1e-10) << dom.name();
    }
  }
}

TEST(ClosestPoint, AmbiguousAtCenter) {
  const auto ell = CurvedDomain::ellipse();
  EXPECT_THROW(closest_point(ell, Vec2{0.0, 0.0}), pefem::AmbiguousProjection);
}

TEST(ExactNormal, DiskIsRadial) {
  const auto disk = CurvedDomain::unit_disk();
  const Vec2 n0 = exact_normal(disk, 0.0);
  EXPECT_NEAR(n0.x, 1.0, 1e-14);
  EXPECT_NEAR(n0.y, 0.0, 1e-14);
  const Vec2 n25 = exact_normal(disk, 0.25);
  EXPECT_NEAR(n25.x, 0.0, 1e-14);
  EXPECT_NEAR(n25.y, 1.0, 1e-14);
}

// central finite difference of gamma, rotated 90 degrees
TEST(ExactNormal, StarAgainstFiniteDifferenceOracle) {
  const auto star = CurvedDomain::star();
  const double t = 0.1;
  const double h = 1e-6;
  const Vec2 tan_fd = (star.gamma(t + h) - star.gamma(t - h)) / (2.0 * h);
  const Vec2 n_fd = tan_fd.normalized().perp_cw();
  const Vec2 n = exact_normal(star, t);
  EXPECT_LT((n - n_fd).norm(), 1e-8);
  EXPECT_NEAR(n.norm(), 1.0, 1e-14);
  // points away from the inside region
  EXPECT_FALSE(star.inside(star.gamma(t) + n * 1e-5));
  EXPECT_TRUE(star.inside(star.gamma(t) - n * 1e-5));
}

TEST(ChordGap, CircleSagittaClosedForm) {
  const auto disk = CurvedDomain::unit_disk();
  // chord subtending angle theta has gap 1 - cos(theta/2)
  for (const double theta : {kPi / 6.0, kPi / 3.0}) {
    const Vec2 a{std::cos(-theta / 2.0), std::sin(-theta / 2.0)};
    const Vec2 b{std::cos(theta / 2.0), std::sin(theta / 2.0)};
    EXPECT_NEAR(chord_gap(disk, a, b), 1.0 - std::cos(theta / 2.0), 1e-8);
  }
}

TEST(ChordGap, DegenerateChordIsZero) {
  const auto star = CurvedDomain::star();
  const Vec2 a = star.gamma(0.37);
  EXPECT_EQ(chord_gap(star, a, a), 0.0);
}

// chord of length l on the unit circle: gap = 1 - sqrt(1 - l^2/4)
TEST(ChordGap, CircleChordLengthFormula) {
  const auto disk = CurvedDomain::unit_disk();
  for (const double l : {0.05, 0.2, 0.5, 0.9}) {
    const double half_angle = std::asin(l / 2.0);
    const Vec2 a{std::cos(-half_angle), std::sin(-half_angle)};
    const Vec2 b{std::cos(half_angle), std::sin(half_angle)};
    const double expected = 1.0 - std::sqrt(1.0 - l * l / 4.0);
    EXPECT_NEAR(chord_gap(disk, a, b), expected, 1e-8) << "l=" << l;
  }
}

// n . n_h >= 1 - C l^2 for facets of length l; C frozen per domain
TEST(ChordGap, FacetNormalAlignment) {
  struct Case {
    CurvedDomain dom;
    double C;
  };
  std::vector<Case> cases;
  cases.push_back({CurvedDomain::unit_disk(), 0.3});
  cases.push_back({CurvedDomain::ellipse(), 1.0});
  cases.push_back({CurvedDomain::star(), 8.0});

  for (const auto& c : cases) {
    for (int i = 0; i < 64; ++i) {
      const double t0 = i / 64.0;
      const double dt = 0.01;  // short facet
      const Vec2 a = c.dom.gamma(t0);
      const Vec2 b = c.dom.gamma(t0 + dt);
      const double l = (b - a).norm();
      const Vec2 nh = pefem::facet_normal(a, b);
      const Vec2 n = exact_normal(c.dom, t0 + 0.5 * dt);
      EXPECT_GE(n.dot(nh), 1.0 - c.C * l * l)
          << c.dom.name() << " t=" << t0;
    }
  }
}

TEST(CurvedDomain, ByNameCatalogAndErrors) {
  EXPECT_EQ(CurvedDomain::by_name("disk").name(), "disk");
  EXPECT_EQ(CurvedDomain::by_name("ellipse").name(), "ellipse");
  EXPECT_EQ(CurvedDomain::by_name("star").name(), "star");
  EXPECT_THROW(CurvedDomain::by_name("square"), pefem::ConfigError);
}

}  // namespace
