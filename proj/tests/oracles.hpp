#pragma once

// Independent reference computations for the unit tests. They use the plain
// textbook formulas (cosh, sinh, long double, fixed bisection) and share no
// code with the library.

#include <cmath>
#include <functional>

namespace oracle {

// Fixed-iteration bisection; f(lo) and f(hi) must differ in sign.
inline long double bisect(const std::function<long double(long double)>& f, long double lo, long double hi) {
  long double flo = f(lo);
  for (int i = 0; i < 200; ++i) {
    const long double mid = 0.5L * (lo + hi);
    const long double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5L * (lo + hi);
}

// Root of kappa coth kappa = rhs on [1e-8, 10].
inline double kappa_coth_root(double rhs) {
  return static_cast<double>(
      bisect([rhs](long double k) { return k * std::cosh(k) / std::sinh(k) - rhs; }, 1e-8L, 10.0L));
}

// Values frozen from a 30-digit computation.
inline constexpr double kCoth2 = 1.915008048154537481;   // kappa coth kappa = 2
inline constexpr double kCoth3 = 2.984704585357886816;   // = 3
inline constexpr double kCoth4 = 3.997302692060432974;   // = 4

}  // namespace oracle
