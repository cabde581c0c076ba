#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "shrinkedge/vertex_model.hpp"

namespace shrinkedge {

/// P1 finite-element pencil (K, M) for the operator on both edges. Unknowns are
/// ordered short edge (from the Neumann end inward), vertex trace unknowns,
/// then the long edge from the vertex toward the Dirichlet end, which keeps
/// both matrices Hermitian tridiagonal.
struct DiscreteOperator {
  std::vector<double> k_diag;
  std::vector<cplx> k_off;  // k_off[i] = K(i, i+1)
  std::vector<double> m_diag;
  std::vector<cplx> m_off;
  std::size_t n_s = 0;
  std::size_t n_e = 0;
  std::size_t vertex_dofs = 0;  // dim ker P
  std::string constraints;

  std::size_t size() const { return k_diag.size(); }
};

/// n_s nodes on the short edge (length eps) and n_e on the long edge, both
/// counting endpoints. Throws MeshTooCoarse below 16 nodes.
DiscreteOperator assemble(const VertexCondition& vc, double epsilon, std::size_t n_s, std::size_t n_e);

/// Number of pencil eigenvalues below sigma, from the LDL* pivots of K - sigma M.
/// Throws FactorizationBreakdown on a non-finite pivot.
std::size_t count_below(const DiscreteOperator& op, double sigma);

/// count_below(op, 0): the discrete negative-eigenvalue count.
std::size_t negative_inertia(const DiscreteOperator& op);

/// Smallest `count` (<= 6) pencil eigenvalues by inertia bisection, relative tolerance 1e-8.
std::vector<double> lowest_eigenvalues(const DiscreteOperator& op, std::size_t count);

/// Observed order p in |lambda_h - reference| ~ h^p for the lowest eigenvalue
/// over a mesh ladder of (n_s, n_e). Without a reference, successive differences
/// are used, which requires a constant refinement ratio.
double convergence_order(const VertexCondition& vc, double epsilon,
                         std::span<const std::pair<std::size_t, std::size_t>> ladder,
                         std::optional<double> reference = std::nullopt);

}  // namespace shrinkedge
