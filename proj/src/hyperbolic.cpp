#include "shrinkedge/hyperbolic.hpp"

#include <cmath>

namespace shrinkedge::hyp {

double x_coth(double x) {
  const double ax = std::abs(x);
  if (ax < 1e-4) return 1.0 + x * x / 3.0;
  if (ax <= 1.0) return x / std::tanh(x);
  // coth x = 1 + 2 e^{-2x} / (1 - e^{-2x}) = 1 + 2 / expm1(2x)
  return ax * (1.0 + 2.0 / std::expm1(2.0 * ax));
}

double x_tanh(double x) { return x * std::tanh(x); }

double phi(double x) {
  if (x < 0.5) {
    // sinh 2x - 2x = sum_{n>=1} (2x)^{2n+1} / (2n+1)!
    const double y = 2.0 * x;
    double term = y;
    double sum = 0.0;
    for (int n = 1; n < 14; ++n) {
      term *= y * y / ((2.0 * n) * (2.0 * n + 1.0));
      sum += term;
    }
    const double s = std::sinh(x);
    return sum / (s * s);
  }
  const double e = std::exp(-2.0 * x);
  const double one_minus = -std::expm1(-2.0 * x);
  const double coth = 1.0 + 2.0 * e / one_minus;
  return 2.0 * coth - 8.0 * x * e / (one_minus * one_minus);
}

double psi(double t) {
  const double sech = 2.0 * std::exp(-t) / (1.0 + std::exp(-2.0 * t));
  return 2.0 * std::tanh(t) + 2.0 * t * sech * sech;
}

double sinh_ratio(double k, double x) {
  if (k < 1e-8) return x;
  if (k < 1.0) return std::sinh(k * x) / std::sinh(k);
  // e^{k(x-1)} (1 - e^{-2kx}) / (1 - e^{-2k})
  return std::exp(k * (x - 1.0)) * std::expm1(-2.0 * k * x) / std::expm1(-2.0 * k);
}

double cosh_ratio(double k, double x) {
  if (k < 1.0) return std::cosh(k * x) / std::cosh(k);
  return std::exp(k * (x - 1.0)) * (1.0 + std::exp(-2.0 * k * x)) / (1.0 + std::exp(-2.0 * k));
}

double inv_sinh(double k) {
  if (k < 1.0) return 1.0 / std::sinh(k);
  return -2.0 * std::exp(-k) / std::expm1(-2.0 * k);
}

}  // namespace shrinkedge::hyp
