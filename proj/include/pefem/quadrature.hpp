/// \file quadrature.hpp
/// \brief Gauss quadrature on the reference segment [0,1] and the reference
///        triangle {x,y >= 0, x+y <= 1}.
///
/// Segment rules are Gauss-Legendre. Triangle rules use the symmetric
/// 3-point rule up to degree 2 and a conical-product Gauss rule beyond
/// (tensor Gauss on the collapsed square with the Jacobi factor absorbed
/// into the weights), which is exact for the requested total degree with
/// all points inside and all weights positive.

#ifndef PEFEM_QUADRATURE_HPP
#define PEFEM_QUADRATURE_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "pefem/errors.hpp"

namespace pefem {

/// One-dimensional Gauss-Legendre rule on [0,1]; exact for degree 2n-1.
/// Nodes found by Newton on P_n with the three-term recurrence.
inline void gauss_legendre(int n, std::vector<double>& nodes,
                           std::vector<double>& weights) {
  nodes.resize(n);
  weights.resize(n);
  constexpr double kPi = 3.14159265358979323846;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[i] = 0.5 * (1.0 - x);  // mirror: descending x maps to ascending t
    nodes[n - 1 - i] = 0.5 * (1.0 + x);
    weights[i] = 0.5 * w;
    weights[n - 1 - i] = 0.5 * w;
  }
}

enum class QuadKind { triangle, segment };

/// Quadrature rule on a reference cell. Triangle points are stored in
/// barycentric coordinates, segment points as a parameter in [0,1].
struct QuadratureRule {
  QuadKind kind = QuadKind::segment;
  int exactness = 0;
  std::vector<std::array<double, 3>> bary;  ///< triangle points
  std::vector<double> t;                    ///< segment points
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
};

/// Build a rule exact for polynomials up to `degree` (max 12).
inline QuadratureRule make_quadrature(QuadKind kind, int degree) {
  if (degree > 12)
    throw UnsupportedDegree("make_quadrature: exactness degree " +
                            std::to_string(degree) + " exceeds 12");
  if (degree < 1) degree = 1;

  QuadratureRule rule;
  rule.kind = kind;
  rule.exactness = degree;

  if (kind == QuadKind::segment) {
    const int n = (degree + 2) / 2;  // ceil((degree+1)/2)
    gauss_legendre(n, rule.t, rule.weights);
    return rule;
  }

  if (degree == 1) {
    rule.bary = {{1.0 / 3, 1.0 / 3, 1.0 / 3}};
    rule.weights = {0.5};
    return rule;
  }
  if (degree == 2) {
    rule.bary = {{2.0 / 3, 1.0 / 6, 1.0 / 6},
                 {1.0 / 6, 2.0 / 3, 1.0 / 6},
                 {1.0 / 6, 1.0 / 6, 2.0 / 3}};
    rule.weights = {1.0 / 6, 1.0 / 6, 1.0 / 6};
    return rule;
  }

  // conical product: x = u(1-v), y = v; the extra (1-v) raises the
  // v-degree of the integrand by one
  const int nu = (degree + 2) / 2;
  const int nv = (degree + 3) / 2;
  std::vector<double> un, uw, vn, vw;
  gauss_legendre(nu, un, uw);
  gauss_legendre(nv, vn, vw);
  for (int j = 0; j < nv; ++j) {
    for (int i = 0; i < nu; ++i) {
      const double x = un[i] * (1.0 - vn[j]);
      const double y = vn[j];
      rule.bary.push_back({1.0 - x - y, x, y});
      rule.weights.push_back(uw[i] * vw[j] * (1.0 - vn[j]));
    }
  }
  return rule;
}

}  // namespace pefem

#endif  // PEFEM_QUADRATURE_HPP
