#pragma once

#include <optional>
#include <span>
#include <vector>

#include "shrinkedge/vertex_model.hpp"

namespace shrinkedge {

/// One negative eigenvalue lambda = -kappa^2 at a given eps.
struct SpectralPoint {
  double epsilon = 0.0;
  double kappa = 0.0;
  double lambda = 0.0;
  std::optional<Kind> kind;
  std::optional<double> alpha_predicted;
};

SpectralPoint make_spectral_point(double epsilon, double kappa, std::optional<Kind> kind = std::nullopt,
                                  std::optional<double> alpha = std::nullopt);

/// Rank-one characteristic function; its real zeros are square roots of eigenvalues.
cplx g0(double eps, cplx k, cplx z, double mu);

/// Rank-zero characteristic function.
cplx h0(double eps, cplx k, double a, double b, cplx c);

/// Secular function on k = i kappa, divided by cosh(kappa eps) sinh(kappa) so
/// it never overflows. Zero exactly at negative eigenvalues -kappa^2. Rank 2
/// returns the constant 1.
double secular_neg(const VertexCondition& vc, double eps, double kappa);

/// All negative eigenvalues at eps in (0, 0.2], ascending in kappa. Each root is
/// located in the chart matching its type (kappa, rho = kappa sqrt(eps),
/// tau = kappa eps^{1/3}) and tagged with that type. Throws CountMismatch when
/// the number of roots differs from the closed-form count.
std::vector<SpectralPoint> find_negative_eigenvalues(const VertexCondition& vc, double eps);

/// The real-k pole function: cos(k eps) sin(k), g0, (k sin k eps - mu cos k eps) sin k, or h0.
double pole_function(const VertexCondition& vc, double eps, double k);

/// Magnitude of the terms making up pole_function at k, for relative tolerances.
double pole_function_scale(const VertexCondition& vc, double eps, double k);

/// Real zeros of the pole function in (0, k_max] by sign scan and bisection.
/// Requires k_max <= 200 / eps. Pairs of roots closer than the scan step can
/// be missed.
std::vector<double> scan_real_poles(const VertexCondition& vc, double eps, double k_max);

struct RateFit {
  double slope = 0.0;      // least-squares d log|lambda| / d log eps
  double coeff = 0.0;      // median of |lambda| eps^{-rounded slope}
  double residual = 0.0;   // rms of the log-log fit
  double rounded_slope = 0.0;
};

/// Fits |lambda| ~ coeff * eps^slope. Needs at least four points with distinct
/// eps; throws AmbiguousRate if the slope is more than 0.15 from 0, -2/3 and -1.
RateFit fit_rate(std::span<const SpectralPoint> points);

}  // namespace shrinkedge
