#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace shrinkedge {

using cplx = std::complex<double>;
using Mat2 = std::array<std::array<cplx, 2>, 2>;

/// Decoupled Dirichlet conditions at the central vertex: P = I, T = 0.
struct Rank2 {
  bool operator==(const Rank2&) const = default;
};

/// Rank-one projection parametrized by z in C u {inf}; T acts as multiplication
/// by mu on the range of Q. An empty `z` is the point at infinity.
struct Rank1 {
  std::optional<cplx> z;
  double mu = 0.0;

  bool z_infinite() const { return !z.has_value(); }
  double z_abs2() const { return std::norm(*z); }
  bool operator==(const Rank1&) const = default;
};

/// Generalized Robin condition U' = T U with T = [[a, c], [conj(c), b]].
struct Rank0 {
  double a = 0.0;
  double b = 0.0;
  cplx c{};
  bool operator==(const Rank0&) const = default;
};

using VertexCondition = std::variant<Rank2, Rank1, Rank0>;

enum class Kind { B, S, C };

const char* to_string(Kind kind);
Kind kind_from_string(const std::string& s);

/// Leading exponent of |lambda| in eps for each eigenvalue type: 0, -1, -2/3.
double predicted_slope(Kind kind);

struct EigPrediction {
  Kind kind;
  double alpha;
};

int rank_of(const VertexCondition& vc);

/// Checks finiteness of every parameter; returns the condition unchanged.
VertexCondition validate(const VertexCondition& vc);

/// Orthogonal projection P in C^2 and its complement Q = I - P.
Mat2 projection_P(const VertexCondition& vc);
Mat2 projection_Q(const VertexCondition& vc);

/// T extended by zero to all of C^2 (T Q for rank one, the Robin matrix for rank zero).
Mat2 coupling_T(const VertexCondition& vc);

/// Rows of the negative-eigenvalue table that match `vc`. At most two entries,
/// type B first.
std::vector<EigPrediction> classify(const VertexCondition& vc);

/// Unique kappa > 0 with kappa coth kappa = -mu (1 + |z|^2).
double solve_kappa1(std::optional<cplx> z, double mu);

/// Unique kappa > 0 with kappa coth kappa = (|c|^2 - ab) / a, or = -b when a = c = 0.
double solve_kappa0(double a, double b, cplx c);

/// Root of kappa coth kappa = rhs for rhs > 1.
double solve_x_coth(double rhs);

/// Non-resonance in the sense of boundary values on the short edge: fails
/// only for (rank 1, z = inf, mu = 0) and (rank 0, a = c = 0).
bool bls_nonresonant(const VertexCondition& vc);

/// Absence of a threshold resonance for the lead problem: fails for
/// (rank 1, z = inf) and every rank-0 condition.
bool borisov_nonresonant(const VertexCondition& vc);

/// JSON encoding:
///   {"rank_p":2} | {"rank_p":1,"z":{"re":x,"im":y}|"inf","mu":m}
///   | {"rank_p":0,"a":a,"b":b,"c":{"re":x,"im":y}}
/// Real fields also accept {"re":x,"im":0}; a nonzero imaginary part on a or b
/// is rejected as NonHermitian.
VertexCondition vertex_condition_from_json(const nlohmann::json& j);
nlohmann::json to_json(const VertexCondition& vc);

std::string describe(const VertexCondition& vc);

}  // namespace shrinkedge
