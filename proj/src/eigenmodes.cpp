#include "shrinkedge/eigenmodes.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "shrinkedge/detail/overloaded.hpp"
#include "shrinkedge/error.hpp"
#include "shrinkedge/hyperbolic.hpp"
#include "shrinkedge/resolvent.hpp"

namespace shrinkedge {

namespace {

struct Amplitudes {
  cplx s, e;
};

void require_root(const VertexCondition& vc, const SpectralPoint& p) {
  if (std::holds_alternative<Rank2>(vc))
    throw Error(ErrorCode::NotAnEigenvalue, "rank 2 conditions have no negative eigenvalues");
  if (!(p.epsilon > 0.0) || !(p.kappa > 0.0))
    throw Error(ErrorCode::InvalidInput, "spectral point needs eps > 0 and kappa > 0");
  const double f = secular_neg(vc, p.epsilon, p.kappa);
  if (!(std::abs(f) <= kSecularTol)) {
    std::ostringstream os;
    os << "kappa=" << p.kappa << " is not a root at eps=" << p.epsilon << " (secular value " << f << ")";
    throw Error(ErrorCode::NotAnEigenvalue, os.str());
  }
}

// Vertex values (psi_s(eps), psi_e(1)) spanning the solution space of the
// vertex conditions, unnormalized.
Amplitudes vertex_amplitudes(const VertexCondition& vc, double eps, double kappa) {
  return std::visit(
      detail::overloaded{
          [](const Rank2&) -> Amplitudes { return {}; },
          [](const Rank1& r) -> Amplitudes {
            if (r.z_infinite()) return {1.0, 0.0};
            return {-*r.z, 1.0};
          },
          [&](const Rank0& r) -> Amplitudes {
            // Either row of the 2x2 system gives a null vector; take the
            // better conditioned one (one of them is zero when c = 0).
            const Amplitudes first{-r.c, kappa * std::tanh(kappa * eps) + r.a};
            const Amplitudes second{hyp::x_coth(kappa) + r.b, -std::conj(r.c)};
            const auto nrm = [](const Amplitudes& v) { return std::norm(v.s) + std::norm(v.e); };
            return nrm(first) >= nrm(second) ? first : second;
          },
      },
      vc);
}

// Squared edge norms of the mode with unit vertex values, times 4 kappa.
struct EdgeWeights {
  double s, e;
};

EdgeWeights edge_weights(double eps, double kappa) { return {hyp::psi(kappa * eps), hyp::phi(kappa)}; }

Amplitudes normalized_amplitudes(const VertexCondition& vc, const SpectralPoint& p) {
  Amplitudes A = vertex_amplitudes(vc, p.epsilon, p.kappa);
  const auto w = edge_weights(p.epsilon, p.kappa);
  const double norm2 = (std::norm(A.s) * w.s + std::norm(A.e) * w.e) / (4.0 * p.kappa);
  if (!(norm2 > 0.0)) throw Error(ErrorCode::NotAnEigenvalue, "vertex conditions admit only the zero mode");
  const cplx anchor = std::abs(A.e) > 0.0 ? A.e : A.s;
  const cplx phase = std::conj(anchor) / std::abs(anchor);
  const double scale = 1.0 / std::sqrt(norm2);
  A.s *= phase * scale;
  A.e *= phase * scale;
  if (std::abs(A.e) > 0.0) A.e = std::abs(A.e);
  else A.s = std::abs(A.s);
  return A;
}

using Vec2 = std::array<cplx, 2>;

Vec2 mul(const Mat2& m, const Vec2& v) {
  return {m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]};
}

}  // namespace

Eigenmode build_eigenmode(const VertexCondition& vc, const SpectralPoint& point, std::size_t n) {
  require_root(vc, point);
  const Amplitudes A = normalized_amplitudes(vc, point);
  const double ke = point.kappa * point.epsilon;
  auto psi_s = GridFunction::sample([&](double y) { return A.s * hyp::cosh_ratio(ke, y); }, n);
  auto psi_e = GridFunction::sample([&](double x) { return A.e * hyp::sinh_ratio(point.kappa, x); }, n);
  return {point, A.s / std::cosh(ke), A.e * hyp::inv_sinh(point.kappa), A.s, A.e, std::move(psi_s),
          std::move(psi_e)};
}

LocalizationReport localization(const VertexCondition& vc, const SpectralPoint& point) {
  require_root(vc, point);
  const Amplitudes A = vertex_amplitudes(vc, point.epsilon, point.kappa);
  const auto w = edge_weights(point.epsilon, point.kappa);
  const double s = std::norm(A.s) * w.s, e = std::norm(A.e) * w.e;
  const double norm_s = s / (s + e);
  return {norm_s, 1.0 - norm_s};
}

LocalizationReport quadrature_norms(const Eigenmode& mode) {
  return {mode.point.epsilon * std::pow(l2_norm(mode.psi_s), 2), std::pow(l2_norm(mode.psi_e), 2)};
}

double mode_residual(const VertexCondition& vc, const SpectralPoint& point, const Eigenmode& mode) {
  const double eps = point.epsilon, kappa = point.kappa;
  const double km = mode.point.kappa, ke = km * mode.point.epsilon;
  const double sup = std::max(sup_norm(mode.psi_s), sup_norm(mode.psi_e));
  double r = 0.0;

  // The closed forms satisfy psi'' = kappa_m^2 psi on the edge e and
  // d^2/dy^2 psi_s = (kappa_m eps)^2 psi_s, so the ODE defect at lambda is
  // |kappa_m^2 + lambda| |psi| on both edges.
  r = std::max(r, std::abs(km * km + point.lambda) / (kappa * kappa));

  for (std::size_t j = 0; j < mode.psi_s.n(); ++j)
    r = std::max(r, std::abs(mode.psi_s[j] - mode.amp_s * hyp::cosh_ratio(ke, mode.psi_s.node(j))) / sup);
  for (std::size_t j = 0; j < mode.psi_e.n(); ++j)
    r = std::max(r, std::abs(mode.psi_e[j] - mode.amp_e * hyp::sinh_ratio(km, mode.psi_e.node(j))) / sup);

  // psi_s'(0) = 0 holds for cosh identically; psi_e(0) is read off the grid.
  r = std::max(r, std::abs(mode.psi_e[0]) / sup);

  const Vec2 U{mode.psi_s.back(), mode.psi_e.back()};
  const Vec2 Up{-mode.psi_s.back() * kappa * std::tanh(kappa * eps), -mode.psi_e.back() * hyp::x_coth(kappa)};
  const double scale = std::max({std::abs(U[0]), std::abs(U[1]), 1e-300}) * (kappa + 1.0);
  const Mat2 P = projection_P(vc), Q = projection_Q(vc), T = coupling_T(vc);
  const Vec2 PU = mul(P, U), QUp = mul(Q, Up), TQU = mul(T, mul(Q, U));
  for (int i = 0; i < 2; ++i) {
    r = std::max(r, std::abs(PU[i]) / std::max(std::abs(U[0]), std::abs(U[1])));
    r = std::max(r, std::abs(QUp[i] - TQU[i]) / scale);
  }
  return r;
}

cplx mode_inner(const Eigenmode& m1, const Eigenmode& m2) {
  return weighted_inner(m1.point.epsilon, m1.psi_s, m1.psi_e, m2.psi_s, m2.psi_e);
}

}  // namespace shrinkedge
