#pragma once

#include <array>
#include <string>

#include "shrinkedge/vertex_model.hpp"

namespace shrinkedge {

using Mat3 = std::array<std::array<cplx, 3>, 3>;
using Mat4 = std::array<std::array<cplx, 4>, 4>;

/// 3x3 complex matrix equal to its conjugate transpose (checked to 1e-14 on construction).
class Hermitian3 {
 public:
  explicit Hermitian3(const Mat3& m);

  const Mat3& matrix() const { return m_; }
  const cplx& operator()(int i, int j) const { return m_[i][j]; }
  double frobenius_norm() const;

 private:
  Mat3 m_;
};

struct Eigensystem3 {
  std::array<double, 3> values;  // ascending
  Mat3 vectors;                  // column j belongs to values[j]
};

/// Eigen decomposition, values ascending.
Eigensystem3 hermitian3_eigensystem(const Hermitian3& m);
std::array<double, 3> hermitian3_eigs(const Hermitian3& m);

/// D_eps = D_inf - eps^{-1} E_0 for the generalized Robin condition.
Hermitian3 build_D_eps(double a, double b, cplx c, double eps);
Hermitian3 build_D_inf(double a, double b, cplx c);
Hermitian3 build_E0();

/// The 4x4 stage: A, B encode the vertex conditions, M is the
/// Dirichlet-to-Neumann map at zero, D = A B^* + B M B^*.
struct BehrndtLugerMatrices {
  Mat4 A, B, M, D;
};
BehrndtLugerMatrices behrndt_luger_matrices(double a, double b, cplx c, double eps);

struct ClosedFormCount {
  int count;
  std::string condition;
};

/// Closed-form count for rank-0 conditions from the inequalities on (a, b, c).
ClosedFormCount closed_form_count(double a, double b, cplx c);

struct CountReport {
  int count;
  int via_inertia;
  int via_closed_form;
  std::string conditions_matched;
};

/// Number of negative eigenvalues for a rank-0 condition: positive eigenvalues
/// of D_eps, cross-checked against the closed form. Throws Inconsistent when
/// the two disagree.
CountReport count_negative(const Rank0& vc, double eps);

/// Closed-form number of negative eigenvalues for any condition.
int expected_negative_count(const VertexCondition& vc);

}  // namespace shrinkedge
