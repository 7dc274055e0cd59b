/// \file numerics.hpp
/// \brief Fitting helpers shared by the rate checks.

#ifndef PEFEM_NUMERICS_HPP
#define PEFEM_NUMERICS_HPP

#include <cmath>
#include <cstddef>
#include <vector>

namespace pefem {

/// Least-squares slope of y against x.
inline double ls_slope(const std::vector<double>& x,
                       const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  return (n * sxy - sx * sy) / denom;
}

/// Least-squares slope of log(y) vs log(x), restricted to the last
/// `window` points (standard EOC practice: drop preasymptotic levels).
inline double fit_log_slope(const std::vector<double>& x,
                            const std::vector<double>& y,
                            std::size_t window = 4) {
  const std::size_t n = x.size();
  const std::size_t m = n < window ? n : window;
  std::vector<double> lx, ly;
  lx.reserve(m);
  ly.reserve(m);
  for (std::size_t i = n - m; i < n; ++i) {
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  return ls_slope(lx, ly);
}

}  // namespace pefem

#endif  // PEFEM_NUMERICS_HPP
