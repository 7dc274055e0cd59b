#include "pefem/taylor.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace {

using pefem::CurvedDomain;
using pefem::derivative;
using pefem::generate_mesh;
using pefem::PolygonalMesh;
using pefem::refine;
using pefem::SmoothField;
using pefem::taylor_band;
using pefem::taylor_eval;
using pefem::Vec2;

SmoothField pure_exp_x() {
  SmoothField f;
  f.name = "exp_x";
  f.deriv = [](int, int b, double x, double) {
    return b == 0 ? std::exp(x) : 0.0;
  };
  return f;
}

std::vector<PolygonalMesh> disk_sequence(const CurvedDomain& disk,
                                         int levels) {
  std::vector<PolygonalMesh> seq;
  seq.push_back(generate_mesh(disk, 8));
  for (int l = 1; l < levels; ++l) seq.push_back(refine(seq.back(), disk));
  return seq;
}

TEST(SmoothField, DerivativesMatchFiniteDifferences) {
  const auto catalog = {pefem::fields::exp_sin(), pefem::fields::trig_cosh(),
                        pefem::fields::polynomial(
                            "p3", {{1.0, 3, 0}, {-2.0, 1, 2}, {0.5, 0, 1}})};
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double step = 1e-5;
  for (const auto& v : catalog) {
    for (int trial = 0; trial < 100; ++trial) {
      const double x = u(rng), y = u(rng);
      for (auto [a, b] : {std::pair{1, 0}, {0, 1}, {1, 1}, {2, 0}, {0, 2}}) {
        double fd;
        if (a == 1 && b == 0)
          fd = (v.deriv(0, 0, x + step, y) - v.deriv(0, 0, x - step, y)) /
               (2 * step);
        else if (a == 0 && b == 1)
          fd = (v.deriv(0, 0, x, y + step) - v.deriv(0, 0, x, y - step)) /
               (2 * step);
        else if (a == 1 && b == 1)
          fd = (v.deriv(1, 0, x, y + step) - v.deriv(1, 0, x, y - step)) /
               (2 * step);
        else if (a == 2)
          fd = (v.deriv(1, 0, x + step, y) - v.deriv(1, 0, x - step, y)) /
               (2 * step);
        else
          fd = (v.deriv(0, 1, x, y + step) - v.deriv(0, 1, x, y - step)) /
               (2 * step);
        const double exact = v.deriv(a, b, x, y);
        EXPECT_NEAR(fd, exact, 1e-6 * std::max(1.0, std::abs(exact)))
            << v.name;
      }
    }
  }
}

TEST(TaylorEval, QuadraticIsExact) {
  const auto v = pefem::fields::polynomial("x2", {{1.0, 2, 0}});
  const Vec2 center{0.3, -0.7}, target{1.1, 0.4};
  EXPECT_NEAR(taylor_eval(v, center, target, 2), target.x * target.x, 1e-14);
}

TEST(TaylorEval, ExpFirstOrder) {
  const auto v = pure_exp_x();
  const double d = 0.01;
  const double t1 = taylor_eval(v, Vec2{0, 0}, Vec2{d, 0}, 1);
  EXPECT_NEAR(t1, 1.0 + d, 1e-15);
  const double remainder = std::exp(d) - t1;
  EXPECT_NEAR(remainder, d * d / 2.0, d * d * d);
}

TEST(TaylorEval, OrderZeroIgnoresTarget) {
  const auto v = pefem::fields::exp_sin();
  const Vec2 c{0.2, 0.5};
  EXPECT_EQ(taylor_eval(v, c, Vec2{5.0, -3.0}, 0), v.value(c));
}

TEST(TaylorBand, ZeroOffsetKillsAllTerms) {
  const auto v = pefem::fields::exp_sin();
  const Vec2 c{0.4, 0.1};
  EXPECT_EQ(taylor_band(v, c, c, 1, 3), 0.0);
}

TEST(TaylorBand, PicksTheQuadraticTerm) {
  const auto v = pefem::fields::polynomial("x+x2", {{1.0, 1, 0}, {1.0, 2, 0}});
  const double d = 0.3;
  EXPECT_NEAR(taylor_band(v, Vec2{0, 0}, Vec2{d, 0}, 2, 2), d * d, 1e-15);
}

TEST(TaylorBand, ExpSeriesCoefficients) {
  const auto v = pure_exp_x();
  const double d = 0.05;
  EXPECT_NEAR(taylor_band(v, Vec2{0, 0}, Vec2{d, 0}, 1, 3),
              d + d * d / 2.0 + d * d * d / 6.0, 1e-16);
}

TEST(TaylorBand, EvalDecomposesIntoValuePlusBand) {
  const auto v = pefem::fields::trig_cosh();
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec2 c{u(rng), u(rng)}, t{u(rng), u(rng)};
    for (int k = 1; k <= 3; ++k)
      EXPECT_NEAR(taylor_eval(v, c, t, k),
                  v.value(c) + taylor_band(v, c, t, 1, k), 1e-13);
  }
}

TEST(Lemma2, PolynomialFlaggedExact) {
  const auto disk = CurvedDomain::unit_disk();
  const auto meshes = disk_sequence(disk, 4);
  const auto v =
      pefem::fields::polynomial("q", {{1.0, 2, 0}, {-1.0, 0, 1}, {2.0, 0, 0}});
  const auto check = pefem::lemma2_rate_check(v, disk, meshes, 2, 0);
  EXPECT_TRUE(check.exact);
}

TEST(Lemma2, ExpSinRatesOnDisk) {
  const auto disk = CurvedDomain::unit_disk();
  const auto meshes = disk_sequence(disk, 5);
  const auto v = pefem::fields::exp_sin();

  const auto m0 = pefem::lemma2_rate_check(v, disk, meshes, 2, 0);
  EXPECT_FALSE(m0.exact);
  EXPECT_NEAR(m0.fitted_order, 3.0, 0.25);

  const auto m1 = pefem::lemma2_rate_check(v, disk, meshes, 2, 1);
  EXPECT_NEAR(m1.fitted_order, 2.0, 0.25);
}

TEST(Lemma2, TooFewLevelsIsAnError) {
  const auto disk = CurvedDomain::unit_disk();
  const auto meshes = disk_sequence(disk, 2);
  EXPECT_THROW(
      pefem::lemma2_rate_check(pefem::fields::exp_sin(), disk, meshes, 1, 0),
      pefem::InsufficientResolution);
}

TEST(Lemma1, ExcessIsSmallAndNonincreasing) {
  const auto disk = CurvedDomain::unit_disk();
  const auto meshes = disk_sequence(disk, 5);
  const auto sweep = pefem::lemma1_stability_sweep(pefem::fields::exp_sin(),
                                                   disk, meshes, 2);
  ASSERT_EQ(sweep.size(), 5u);
  // uniform constant: excess <= C * delta_h with C frozen, and the excess
  // dies out along the refinement sequence
  for (const auto& s : sweep) EXPECT_LE(s.excess, 3.0 * s.delta_h);
  EXPECT_LT(sweep.back().excess, 0.2 * sweep.front().excess);
}

TEST(Lemma3, BandRatioStaysBounded) {
  const auto disk = CurvedDomain::unit_disk();
  const auto meshes = disk_sequence(disk, 5);
  for (int k = 1; k <= 3; ++k) {
    const auto sweep = pefem::lemma3_inverse_sweep(pefem::fields::exp_sin(),
                                                   disk, meshes, k);
    for (std::size_t j = 1; j < sweep.size(); ++j)
      EXPECT_LE(sweep[j].ratio, 2.0 * sweep[0].ratio + 1e-12) << "k=" << k;
  }
}

// exactness of the truncated operator on polynomials up to its order
TEST(TaylorEval, ReproducesPolynomialsUpToOrder) {
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto v = pefem::fields::polynomial(
      "full3", {{0.7, 0, 0}, {1.2, 1, 0}, {-0.3, 0, 1}, {0.9, 2, 0},
                {1.1, 1, 1}, {-0.4, 0, 2}, {0.25, 3, 0}, {-0.75, 2, 1},
                {0.5, 1, 2}, {1.5, 0, 3}});
  for (int trial = 0; trial < 20; ++trial) {
    const Vec2 c{u(rng), u(rng)}, t{u(rng), u(rng)};
    EXPECT_NEAR(taylor_eval(v, c, t, 3), v.value(t), 1e-12);
  }
}

}  // namespace
