#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "dvdec/builders.hpp"

namespace dvdec::testing {

inline VectorXd random_vector(int n, unsigned long seed) {
  std::mt19937_64 rng(seed);
  VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = 2.0 * uniform01(rng) - 1.0;
  return v;
}

inline double fit_slope(const std::vector<double>& h, const std::vector<double>& e) {
  const int n = static_cast<int>(h.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const double x = std::log(h[i]), y = std::log(e[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace dvdec::testing
