#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "shrinkedge/grid.hpp"
#include "shrinkedge/vertex_model.hpp"

namespace shrinkedge {

/// Right-hand side on both edges; `s` lives in the rescaled variable y.
struct Forcing {
  GridFunction s;
  GridFunction e;
};

/// Boundary integrals at the central vertex. The solution's boundary vectors
/// are U = V - W and U' = V' - W', with V, V' built from the coefficients.
struct BoundaryData {
  std::array<cplx, 2> W{};
  std::array<cplx, 2> Wp{};
};

struct ResolventSolution {
  cplx c_s{};
  cplx c_e{};
  GridFunction u_s;  // y-variable
  GridFunction u_e;
  cplx lambda{};
  double epsilon = 0.0;
};

/// sqrt(lambda) with Im >= 0.
cplx principal_sqrt(cplx lambda);

/// -(1/k) int_0^x sin k(x - t) f(t) dt with k = sqrt(lambda).
GridFunction apply_L(const GridFunction& f_e, cplx lambda);

/// -(eps/k) int_0^y sin(eps k (y - t)) f(t) dt.
GridFunction apply_L_eps(const GridFunction& f_s, cplx lambda, double epsilon);

BoundaryData boundary_data(const Forcing& f, cplx lambda, double epsilon);

inline constexpr double kDefaultNearPoleTol = 1e-10;

/// Coefficients (c_s, c_e) of the homogeneous parts. Throws NearPole when the
/// active denominator is below near_pole_tol * (|sqrt(lambda)| + 1).
std::pair<cplx, cplx> coefficients(const VertexCondition& vc, const BoundaryData& bd, cplx lambda,
                                   double epsilon, double near_pole_tol = kDefaultNearPoleTol);

/// u_e = L f_e + c_e sin(kx), u_s = L^eps f_s + c_s cos(eps k y).
ResolventSolution resolve(const VertexCondition& vc, double epsilon, cplx lambda, const Forcing& f,
                          double near_pole_tol = kDefaultNearPoleTol);

/// Max defect of the ODEs on both edges, the endpoint conditions and the
/// vertex conditions P U = 0, Q U' = T Q U.
double residual(const VertexCondition& vc, double epsilon, cplx lambda, const Forcing& f,
                const ResolventSolution& sol);

/// (1 / (k sin k)) int_0^1 sin k(1 - t) f(t) dt, evaluated on the direct kernel.
cplx rank2_lead_functional(const GridFunction& f_e, cplx lambda);

/// epsilon * <u_s, v_s> + <u_e, v_e>.
cplx weighted_inner(double epsilon, const GridFunction& u_s, const GridFunction& u_e,
                    const GridFunction& v_s, const GridFunction& v_e);

enum class LimitCase {
  Quadratic,      // rank 2: R_s f = O(eps^2)
  ShortLinear,    // rank 1, z = inf, mu != 0: R_s f = eps B_s f_s + ...
  Resonant,       // rank 1 z = inf mu = 0, rank 0 a = c = 0: order-one limit driven by f_s
  LeadDriven,     // everything else: order-one limit driven by f_e
};

const char* to_string(LimitCase c);
LimitCase limit_case(const VertexCondition& vc);

struct LeadingOrderReport {
  LimitCase matched = LimitCase::LeadDriven;
  std::vector<double> eps;
  std::vector<double> rs_norm;  // ||R_s f|| in the y-variable
  std::vector<double> rs_diff;  // ||R_s f(eps_i) - R_s f(eps_{i+1})||
  std::vector<double> re_diff;
  // Quadratic/ShortLinear: order of ||R_s f||. Otherwise order of the
  // successive differences, i.e. of ||R_s f - limit||. +inf if identically 0.
  double rs_order = 0.0;
  double re_order = 0.0;
  double rs_limit_norm = 0.0;  // ||R_s f|| at the smallest eps
  double re_limit_norm = 0.0;
  std::optional<double> lead_functional_error;  // rank 2 only: max |c_e - B f_e|
};

/// Estimates eps-orders by successive-ratio slopes over a log-spaced eps list
/// (at least 4 values). Throws AmbiguousOrder when the slopes spread by more
/// than `spread_tol` or mix zero and nonzero quantities.
LeadingOrderReport leading_order_probe(const VertexCondition& vc, cplx lambda, const Forcing& f,
                                       std::span<const double> eps_list, double spread_tol = 0.5);

}  // namespace shrinkedge
