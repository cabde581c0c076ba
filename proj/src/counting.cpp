#include "shrinkedge/counting.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "shrinkedge/detail/overloaded.hpp"
#include "shrinkedge/error.hpp"

namespace shrinkedge {

using detail::overloaded;

Hermitian3::Hermitian3(const Mat3& m) : m_(m) {
  double scale = 0.0;
  for (const auto& row : m)
    for (const auto& v : row) scale = std::max(scale, std::abs(v));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (std::abs(m[i][j] - std::conj(m[j][i])) > 1e-14 * std::max(1.0, scale))
        throw Error(ErrorCode::NonHermitian, "matrix is not Hermitian");
  for (int i = 0; i < 3; ++i) m_[i][i] = m_[i][i].real();
}

double Hermitian3::frobenius_norm() const {
  double s = 0.0;
  for (const auto& row : m_)
    for (const auto& v : row) s += std::norm(v);
  return std::sqrt(s);
}

Eigensystem3 hermitian3_eigensystem(const Hermitian3& h) {
  Eigen::Matrix3cd a;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = h(i, j);
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> es(a);  // values ascending
  Eigensystem3 out{};
  for (int j = 0; j < 3; ++j) {
    out.values[j] = es.eigenvalues()(j);
    for (int i = 0; i < 3; ++i) out.vectors[i][j] = es.eigenvectors()(i, j);
  }
  return out;
}

std::array<double, 3> hermitian3_eigs(const Hermitian3& m) { return hermitian3_eigensystem(m).values; }

Hermitian3 build_D_inf(double a, double b, cplx c) {
  return Hermitian3(Mat3{{{0.0, 0.0, 0.0}, {0.0, -a, -c}, {0.0, -std::conj(c), -b - 1.0}}});
}

Hermitian3 build_E0() { return Hermitian3(Mat3{{{1.0, -1.0, 0.0}, {-1.0, 1.0, 0.0}, {0.0, 0.0, 0.0}}}); }

Hermitian3 build_D_eps(double a, double b, cplx c, double eps) {
  const double inv = 1.0 / eps;
  return Hermitian3(Mat3{{{-inv, inv, 0.0}, {inv, -a - inv, -c}, {0.0, -std::conj(c), -b - 1.0}}});
}

BehrndtLugerMatrices behrndt_luger_matrices(double a, double b, cplx c, double eps) {
  BehrndtLugerMatrices m{};
  m.A[1][1] = -a;
  m.A[1][2] = -c;
  m.A[2][1] = -std::conj(c);
  m.A[2][2] = -b;
  m.A[3][3] = 1.0;
  for (int i = 0; i < 3; ++i) m.B[i][i] = 1.0;
  const double inv = 1.0 / eps;
  m.M[0][0] = -inv;
  m.M[0][1] = inv;
  m.M[1][0] = inv;
  m.M[1][1] = -inv;
  m.M[2][2] = -1.0;
  m.M[2][3] = 1.0;
  m.M[3][2] = 1.0;
  m.M[3][3] = -1.0;

  auto mul = [](const Mat4& x, const Mat4& y) {
    Mat4 r{};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) r[i][j] += x[i][k] * y[k][j];
    return r;
  };
  auto adj = [](const Mat4& x) {
    Mat4 r{};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) r[i][j] = std::conj(x[j][i]);
    return r;
  };
  const Mat4 ab = mul(m.A, adj(m.B));
  const Mat4 bmb = mul(mul(m.B, m.M), adj(m.B));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m.D[i][j] = ab[i][j] + bmb[i][j];
  return m;
}

ClosedFormCount closed_form_count(double a, double b, cplx c) {
  const double c2 = std::norm(c);
  if (c2 - a * b < a && a < 0.0) return {2, "|c|^2 - ab < a < 0"};
  if (c2 - a * b > a) return {1, "|c|^2 - ab > a"};
  if (c2 == a * (b + 1.0) && a + b + 1.0 < 0.0) return {1, "|c|^2 = a(b+1), a+b+1 < 0"};
  return {0, "none"};
}

CountReport count_negative(const Rank0& vc, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidInput, "eps must be positive");
  // For tiny eps the eps^{-1} entries swamp the rest; diag(sqrt eps, sqrt eps, 1)
  // is a congruence, so the inertia is unchanged.
  Hermitian3 d = build_D_eps(vc.a, vc.b, vc.c, eps);
  if (eps <= 1e-6) {
    const double s = std::sqrt(eps);
    const std::array<double, 3> w{s, s, 1.0};
    Mat3 m = d.matrix();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m[i][j] *= w[i] * w[j];
    d = Hermitian3(m);
  }
  const auto eigs = hermitian3_eigs(d);
  const double zero_tol = 1e-9 * d.frobenius_norm();
  const int positive = static_cast<int>(std::count_if(eigs.begin(), eigs.end(), [zero_tol](double x) { return x > zero_tol; }));

  const ClosedFormCount cf = closed_form_count(vc.a, vc.b, vc.c);
  // On the boundary |c|^2 = a(b+1) D_eps has an exact zero eigenvalue; the
  // closed form decides there.
  const bool boundary = std::norm(vc.c) == vc.a * (vc.b + 1.0);
  if (positive != cf.count && !boundary)
    throw Error(ErrorCode::Inconsistent, "inertia gives " + std::to_string(positive) + " but the closed form gives " +
                                             std::to_string(cf.count) + " (" + cf.condition + ")");
  return {cf.count, positive, cf.count, cf.condition};
}

int expected_negative_count(const VertexCondition& vc) {
  return std::visit(overloaded{[](const Rank2&) { return 0; },
                               [](const Rank1& r) {
                                 if (r.z_infinite()) return r.mu < 0.0 ? 1 : 0;
                                 return -r.mu * (1.0 + r.z_abs2()) > 1.0 ? 1 : 0;
                               },
                               [](const Rank0& r) { return closed_form_count(r.a, r.b, r.c).count; }},
                    vc);
}

}  // namespace shrinkedge
