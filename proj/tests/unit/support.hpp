#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace test_support {

inline bool rel_close(double a, double b, double tol) {
  return std::fabs(a - b) <= tol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

// Strictly increasing random points, with spacing bounded away from zero.
inline std::vector<double> random_points(std::mt19937_64& rng, std::size_t n, double lo = -50.0, double hi = 50.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> pts;
  while (pts.size() < n) {
    const double x = u(rng);
    bool ok = true;
    for (double y : pts) ok = ok && std::fabs(x - y) > 1e-3;
    if (ok) pts.push_back(x);
  }
  std::sort(pts.begin(), pts.end());
  return pts;
}

}  // namespace test_support
