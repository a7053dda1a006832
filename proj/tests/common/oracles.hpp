#pragma once

// Independent reference computations used only by the tests.

#include <cmath>
#include <functional>
#include <vector>

namespace oracles {

// Sign changes of a real function on a dense grid, refined by plain bisection.
inline std::vector<double> scan_roots(const std::function<double(double)>& f, double a, double b, double step) {
  std::vector<double> roots;
  double x0 = a, f0 = f(a);
  for (double x1 = a + step; x0 < b; x1 += step) {
    x1 = std::min(x1, b);
    const double f1 = f(x1);
    if (f0 == 0.0) {
      roots.push_back(x0);
    } else if ((f0 < 0) != (f1 < 0) && f1 != 0.0) {
      double lo = x0, hi = x1, flo = f0;
      for (int i = 0; i < 200 && hi - lo > 1e-15 * (1 + hi); ++i) {
        const double m = 0.5 * (lo + hi);
        const double fm = f(m);
        if ((fm < 0) == (flo < 0)) {
          lo = m;
          flo = fm;
        } else {
          hi = m;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    x0 = x1;
    f0 = f1;
    if (x1 >= b) break;
  }
  return roots;
}

// Positive roots of sin((2 l1 - l2) k / 2) = 3 sin((2 l1 + l2) k / 2).
inline std::vector<double> tadpole_symmetric_roots(double l1, double l2, double kmax, double step = 1e-3) {
  const double a = 0.5 * (2 * l1 - l2), b = 0.5 * (2 * l1 + l2);
  return scan_roots([&](double k) { return std::sin(a * k) - 3 * std::sin(b * k); }, step * 0.5, kmax, step);
}

}  // namespace oracles
