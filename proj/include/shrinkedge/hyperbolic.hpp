#pragma once

// Overflow-safe hyperbolic building blocks. Arguments reach ~1e3 for the
// square-root branch at eps = 1e-6, far past where sinh/cosh overflow, so
// everything here is written in terms of tanh, coth and exp(-2x).

namespace shrinkedge::hyp {

/// x * coth(x), continuous at 0 with value 1.
double x_coth(double x);

/// x * tanh(x).
double x_tanh(double x);

/// Phi(x) = 2 coth x - 2x / sinh^2 x, i.e. (sinh 2x - 2x) / sinh^2 x.
/// Series below 0.5 (the closed form cancels), exp(-2x) form above.
double phi(double x);

/// Psi(t) = (sinh 2t + 2t) / cosh^2 t = 2 tanh t + 2t / cosh^2 t.
double psi(double t);

/// sinh(k x) / sinh(k) for 0 <= x <= 1, k > 0, without forming sinh(k).
double sinh_ratio(double k, double x);

/// cosh(k x) / cosh(k) for 0 <= x <= 1, k >= 0.
double cosh_ratio(double k, double x);

/// 1 / sinh(k); underflows to 0 for k past ~745 instead of producing inf/inf.
double inv_sinh(double k);

}  // namespace shrinkedge::hyp
