#pragma once

#include <cmath>
#include <random>

#include "i3322/symmat.hpp"

namespace testutil {

inline i3322::Matrix random_symmetric(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  i3322::Matrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j <= i; ++j) m(i, j) = m(j, i) = g(rng);
  return m;
}

// ½[[1-c, ∓s], [∓s, 1+c]]
inline i3322::Matrix block(double c, double sign) {
  const double s = std::sqrt(1.0 - c * c);
  i3322::Matrix m(2, 2);
  m << 1.0 - c, sign * s, sign * s, 1.0 + c;
  return 0.5 * m;
}

inline i3322::Matrix p3() {
  i3322::Matrix m(2, 2);
  m << 0.5, 0.5, 0.5, 0.5;
  return m;
}

}  // namespace testutil
