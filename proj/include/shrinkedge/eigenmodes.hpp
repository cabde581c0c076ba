#pragma once

#include <cstddef>

#include "shrinkedge/grid.hpp"
#include "shrinkedge/secular.hpp"
#include "shrinkedge/vertex_model.hpp"

namespace shrinkedge {

/// Normalized eigenfunction for lambda = -kappa^2:
///   psi_s(y) = c_s cosh(kappa eps y),  psi_e(x) = c_e sinh(kappa x),
/// with eps ||psi_s||^2 + ||psi_e||^2 = 1 (psi_s in the y-variable).
/// amp_s, amp_e are the vertex values psi_s(1), psi_e(1); c_e underflows to 0
/// for very large kappa while amp_e stays meaningful.
struct Eigenmode {
  SpectralPoint point;
  cplx c_s{};
  cplx c_e{};
  cplx amp_s{};
  cplx amp_e{};
  GridFunction psi_s;
  GridFunction psi_e;
};

struct LocalizationReport {
  double norm_s_sq = 0.0;
  double norm_e_sq = 0.0;
};

inline constexpr double kSecularTol = 1e-8;

/// Throws NotAnEigenvalue if |secular_neg| at the point exceeds kSecularTol
/// (always for rank 2). Phase: amp_e >= 0 when nonzero, else amp_s >= 0.
Eigenmode build_eigenmode(const VertexCondition& vc, const SpectralPoint& point, std::size_t n = 257);

/// Edge norms from the closed forms. Same preconditions as build_eigenmode.
LocalizationReport localization(const VertexCondition& vc, const SpectralPoint& point);

/// (eps * int |psi_s|^2 dy, int |psi_e|^2 dx) by composite Simpson on the mode grids.
LocalizationReport quadrature_norms(const Eigenmode& mode);

/// Largest relative defect of -psi'' = lambda psi on both edges (lambda from
/// `point`), of the grid samples against the closed form, of the endpoint
/// conditions and of P U = 0, Q U' = T Q U. Derivatives use point.kappa.
double mode_residual(const VertexCondition& vc, const SpectralPoint& point, const Eigenmode& mode);

/// eps <psi_s, phi_s> + <psi_e, phi_e>.
cplx mode_inner(const Eigenmode& m1, const Eigenmode& m2);

}  // namespace shrinkedge
