#pragma once

#include <cmath>
#include <optional>

namespace shrinkedge {

struct Bracket {
  double lo;
  double hi;
};

/// Bisection on a sign-changing bracket. Runs until the bracket no longer
/// shrinks in floating point, so the returned root is accurate to a few ulps
/// of the bracket endpoints. Returns nullopt if f(lo), f(hi) share a sign.
template <class F>
std::optional<double> bisect(F&& f, Bracket b, double rel_tol = 1e-15) {
  double lo = b.lo, hi = b.hi;
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (std::signbit(flo) == std::signbit(fhi)) return std::nullopt;
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (hi - lo <= rel_tol * std::max(std::abs(lo), std::abs(hi))) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if (std::signbit(fm) == std::signbit(flo)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// For an increasing f: doubles hi until f(hi) >= 0.
template <class F>
std::optional<double> expand_upper(F&& f, double hi, int max_doublings = 200) {
  for (int i = 0; i < max_doublings; ++i) {
    if (f(hi) >= 0.0) return hi;
    hi *= 2.0;
  }
  return std::nullopt;
}

}  // namespace shrinkedge
