#include "shrinkedge/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "shrinkedge/detail/overloaded.hpp"
#include "shrinkedge/error.hpp"
#include "shrinkedge/secular.hpp"

namespace shrinkedge {

namespace {

// Running sine and cosine convolutions of f with frequency w, split by angle
// addition so each is a pair of cumulative integrals.
struct Convolution {
  std::vector<cplx> sin_conv;  // int_0^y sin w(y - t) f(t) dt
  std::vector<cplx> cos_conv;  // int_0^y cos w(y - t) f(t) dt
};

Convolution convolve(const GridFunction& f, cplx w) {
  const std::size_t n = f.n();
  std::vector<cplx> gc(n), gs(n);
  for (std::size_t j = 0; j < n; ++j) {
    const cplx wt = w * f.node(j);
    gc[j] = std::cos(wt) * f[j];
    gs[j] = std::sin(wt) * f[j];
  }
  const auto ic = cumulative_simpson(gc, f.h());
  const auto is = cumulative_simpson(gs, f.h());
  Convolution out{std::vector<cplx>(n), std::vector<cplx>(n)};
  for (std::size_t j = 0; j < n; ++j) {
    const cplx wy = w * f.node(j);
    const cplx s = std::sin(wy), c = std::cos(wy);
    out.sin_conv[j] = s * ic[j] - c * is[j];
    out.cos_conv[j] = c * ic[j] + s * is[j];
  }
  return out;
}

void require_nonzero_k(cplx k) {
  if (k == cplx{}) throw Error(ErrorCode::NearPole, "lambda = 0 is not admissible");
}

void check_denominator(cplx d, cplx k, double tol, const char* what) {
  if (!(std::abs(d) >= tol * (std::abs(k) + 1.0)))
    throw Error(ErrorCode::NearPole, std::string("lambda is too close to a pole (") + what + " vanishes)");
}

using Vec2 = std::array<cplx, 2>;

Vec2 mul(const Mat2& m, const Vec2& v) {
  return {m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]};
}

double max_abs(const Vec2& v) { return std::max(std::abs(v[0]), std::abs(v[1])); }

// Fourth-order central second difference on the even subgrid, spacing H = 2h.
template <class Get>
cplx second_diff(Get&& u, std::size_t j, double H) {
  return (-u(j - 4) + 16.0 * u(j - 2) - 30.0 * u(j) + 16.0 * u(j + 2) - u(j + 4)) / (12.0 * H * H);
}

}  // namespace

cplx principal_sqrt(cplx lambda) {
  cplx k = std::sqrt(lambda);
  if (k.imag() < 0.0 || (k.imag() == 0.0 && k.real() < 0.0)) k = -k;
  return k;
}

GridFunction apply_L(const GridFunction& f_e, cplx lambda) {
  const cplx k = principal_sqrt(lambda);
  require_nonzero_k(k);
  const auto conv = convolve(f_e, k);
  std::vector<cplx> out(f_e.n());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = -conv.sin_conv[j] / k;
  return GridFunction(std::move(out));
}

GridFunction apply_L_eps(const GridFunction& f_s, cplx lambda, double epsilon) {
  const cplx k = principal_sqrt(lambda);
  require_nonzero_k(k);
  const auto conv = convolve(f_s, epsilon * k);
  std::vector<cplx> out(f_s.n());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = -(epsilon / k) * conv.sin_conv[j];
  return GridFunction(std::move(out));
}

BoundaryData boundary_data(const Forcing& f, cplx lambda, double epsilon) {
  const cplx k = principal_sqrt(lambda);
  require_nonzero_k(k);
  const auto cs = convolve(f.s, epsilon * k);
  const auto ce = convolve(f.e, k);
  BoundaryData bd;
  bd.W = {(epsilon / k) * cs.sin_conv.back(), ce.sin_conv.back() / k};
  bd.Wp = {-epsilon * cs.cos_conv.back(), -ce.cos_conv.back()};
  return bd;
}

std::pair<cplx, cplx> coefficients(const VertexCondition& vc, const BoundaryData& bd, cplx lambda,
                                   double epsilon, double tol) {
  const cplx k = principal_sqrt(lambda);
  require_nonzero_k(k);
  const cplx K = epsilon * k;
  const auto [W1, W2] = bd.W;
  const auto [Wp1, Wp2] = bd.Wp;
  const cplx sk = std::sin(k), ck = std::cos(k), sK = std::sin(K), cK = std::cos(K);

  return std::visit(
      detail::overloaded{
          [&](const Rank2&) -> std::pair<cplx, cplx> {
            check_denominator(cK, k, tol, "cos(k eps)");
            check_denominator(sk, k, tol, "sin k");
            return {W1 / cK, W2 / sk};
          },
          [&](const Rank1& r) -> std::pair<cplx, cplx> {
            const double mu = r.mu;
            if (r.z_infinite()) {
              const cplx d = k * sK - mu * cK;
              check_denominator(d, k, tol, "k sin(k eps) - mu cos(k eps)");
              check_denominator(sk, k, tol, "sin k");
              return {(Wp1 - mu * W1) / d, W2 / sk};
            }
            const cplx z = *r.z;
            const double z2 = std::norm(z);
            const cplx g = g0(epsilon, k, z, mu);
            check_denominator(g, k, tol, "g0");
            const cplx cs = ((W1 + z * W2) * k * ck + (mu * (1.0 + z2) * W1 - z2 * Wp1 + z * Wp2) * sk) / g;
            const cplx ce = ((mu * (1.0 + z2) * W2 + std::conj(z) * Wp1 - Wp2) * cK -
                             std::conj(z) * (W1 + z * W2) * k * sK) /
                            g;
            return {cs, ce};
          },
          [&](const Rank0& r) -> std::pair<cplx, cplx> {
            const double a = r.a, b = r.b;
            const cplx c = r.c;
            if (a == 0.0 && c == cplx{}) {
              const cplx ds = k * sK, de = k * ck + b * sk;
              check_denominator(ds, k, tol, "k sin(k eps)");
              check_denominator(de, k, tol, "k cos k + b sin k");
              return {Wp1 / ds, (-Wp2 + b * W2) / de};
            }
            const double det = a * b - std::norm(c);
            const cplx h = h0(epsilon, k, a, b, c);
            check_denominator(h, k, tol, "h0");
            const cplx cs = ((-Wp1 + a * W1 + c * W2) * k * ck + (-b * Wp1 + c * Wp2 + det * W1) * sk) / h;
            const cplx ce = ((std::conj(c) * Wp1 - a * Wp2 + det * W2) * cK +
                             (Wp2 - std::conj(c) * W1 - b * W2) * k * sK) /
                            h;
            return {cs, ce};
          },
      },
      vc);
}

ResolventSolution resolve(const VertexCondition& vc, double epsilon, cplx lambda, const Forcing& f,
                          double near_pole_tol) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw Error(ErrorCode::InvalidInput, "epsilon must be positive");
  if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag()))
    throw Error(ErrorCode::InvalidInput, "lambda must be finite");
  const cplx k = principal_sqrt(lambda);
  const auto [c_s, c_e] = coefficients(vc, boundary_data(f, lambda, epsilon), lambda, epsilon, near_pole_tol);

  GridFunction u_s = apply_L_eps(f.s, lambda, epsilon);
  for (std::size_t j = 0; j < u_s.n(); ++j) u_s[j] += c_s * std::cos(epsilon * k * u_s.node(j));
  GridFunction u_e = apply_L(f.e, lambda);
  for (std::size_t j = 0; j < u_e.n(); ++j) u_e[j] += c_e * std::sin(k * u_e.node(j));
  return {c_s, c_e, std::move(u_s), std::move(u_e), lambda, epsilon};
}

double residual(const VertexCondition& vc, double epsilon, cplx lambda, const Forcing& f,
                const ResolventSolution& sol) {
  const cplx k = principal_sqrt(lambda);
  const cplx K = epsilon * k;
  double r = 0.0;

  // Long edge: stencil on the full solution.
  {
    const auto& u = sol.u_e;
    const double H = 2.0 * u.h();
    for (std::size_t j = 4; j + 4 < u.n(); j += 2) {
      const cplx upp = second_diff([&](std::size_t i) { return u[i]; }, j, H);
      r = std::max(r, std::abs(-upp - lambda * u[j] - f.e[j]));
    }
    r = std::max(r, std::abs(u[0]));
  }

  // Short edge: the particular part carries the eps^-2 scaling, so it is
  // differenced on its own; the homogeneous part c_s cos(K y) is exact up to
  // k^2 - lambda.
  {
    const auto p = apply_L_eps(f.s, lambda, epsilon);
    const double H = 2.0 * p.h();
    for (std::size_t j = 4; j + 4 < p.n(); j += 2) {
      const cplx ppp = second_diff([&](std::size_t i) { return p[i]; }, j, H);
      r = std::max(r, std::abs(-ppp / (epsilon * epsilon) - lambda * p[j] - f.s[j]));
    }
    r = std::max(r, std::abs(sol.c_s) * std::abs(k * k - lambda));
    for (std::size_t j = 0; j < p.n(); ++j)
      r = std::max(r, std::abs(sol.u_s[j] - p[j] - sol.c_s * std::cos(K * sol.u_s.node(j))));

    const auto& u = sol.u_s;
    const cplx d0 = (-25.0 * u[0] + 48.0 * u[2] - 36.0 * u[4] + 16.0 * u[6] - 3.0 * u[8]) / (12.0 * H);
    r = std::max(r, std::abs(d0));
  }

  // Vertex conditions with analytic one-sided derivatives at the junction.
  const auto bd = boundary_data(f, lambda, epsilon);
  const Vec2 U{sol.u_s.back(), sol.u_e.back()};
  const Vec2 Up{k * sol.c_s * std::sin(K) - bd.Wp[0], -k * sol.c_e * std::cos(k) - bd.Wp[1]};
  const Mat2 P = projection_P(vc), Q = projection_Q(vc), T = coupling_T(vc);
  r = std::max(r, max_abs(mul(P, U)));
  const Vec2 QUp = mul(Q, Up), TQU = mul(T, mul(Q, U));
  r = std::max(r, max_abs({QUp[0] - TQU[0], QUp[1] - TQU[1]}));
  return r;
}

cplx rank2_lead_functional(const GridFunction& f_e, cplx lambda) {
  const cplx k = principal_sqrt(lambda);
  require_nonzero_k(k);
  std::vector<cplx> g(f_e.n());
  for (std::size_t j = 0; j < g.size(); ++j) g[j] = std::sin(k * (1.0 - f_e.node(j))) * f_e[j];
  return simpson(g, f_e.h()) / (k * std::sin(k));
}

cplx weighted_inner(double epsilon, const GridFunction& u_s, const GridFunction& u_e, const GridFunction& v_s,
                    const GridFunction& v_e) {
  return epsilon * inner(u_s, v_s) + inner(u_e, v_e);
}

const char* to_string(LimitCase c) {
  switch (c) {
    case LimitCase::Quadratic: return "quadratic";
    case LimitCase::ShortLinear: return "short_linear";
    case LimitCase::Resonant: return "resonant";
    case LimitCase::LeadDriven: return "lead_driven";
  }
  return "?";
}

LimitCase limit_case(const VertexCondition& vc) {
  if (std::holds_alternative<Rank2>(vc)) return LimitCase::Quadratic;
  if (const auto* r = std::get_if<Rank1>(&vc); r && r->z_infinite())
    return r->mu != 0.0 ? LimitCase::ShortLinear : LimitCase::Resonant;
  return bls_nonresonant(vc) ? LimitCase::LeadDriven : LimitCase::Resonant;
}

namespace {

// Median successive-ratio slope of q against eps. +inf when every q is below
// `floor`, i.e. the quantity vanishes identically.
double order_of(std::span<const double> eps, std::span<const double> q, double floor, double spread_tol,
                const char* what) {
  const auto small = [&](double v) { return !(v > floor); };
  const auto n_small = std::count_if(q.begin(), q.end(), small);
  if (n_small == static_cast<std::ptrdiff_t>(q.size())) return std::numeric_limits<double>::infinity();
  if (n_small != 0)
    throw Error(ErrorCode::AmbiguousOrder, std::string(what) + ": quantity vanishes only for some eps");
  std::vector<double> s;
  for (std::size_t i = 0; i + 1 < q.size(); ++i)
    s.push_back(std::log(q[i] / q[i + 1]) / std::log(eps[i] / eps[i + 1]));
  const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
  if (*hi - *lo > spread_tol)
    throw Error(ErrorCode::AmbiguousOrder, std::string(what) + ": successive slopes range over [" +
                                               std::to_string(*lo) + ", " + std::to_string(*hi) + "]");
  std::sort(s.begin(), s.end());
  const std::size_t m = s.size();
  return m % 2 ? s[m / 2] : 0.5 * (s[m / 2 - 1] + s[m / 2]);
}

}  // namespace

LeadingOrderReport leading_order_probe(const VertexCondition& vc, cplx lambda, const Forcing& f,
                                       std::span<const double> eps_list, double spread_tol) {
  if (eps_list.size() < 4) throw Error(ErrorCode::InvalidInput, "leading_order_probe needs at least 4 eps values");
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0)) throw Error(ErrorCode::InvalidInput, "eps values must be positive");
    if (i > 0 && !(eps_list[i] < eps_list[i - 1]))
      throw Error(ErrorCode::InvalidInput, "eps values must be strictly decreasing");
  }

  LeadingOrderReport rep;
  rep.matched = limit_case(vc);
  rep.eps.assign(eps_list.begin(), eps_list.end());

  std::vector<ResolventSolution> sols;
  for (double e : eps_list) sols.push_back(resolve(vc, e, lambda, f));

  double rs_scale = 0.0, re_scale = 0.0;
  for (const auto& s : sols) {
    rep.rs_norm.push_back(l2_norm(s.u_s));
    rs_scale = std::max(rs_scale, rep.rs_norm.back());
    re_scale = std::max(re_scale, l2_norm(s.u_e));
  }
  for (std::size_t i = 0; i + 1 < sols.size(); ++i) {
    rep.rs_diff.push_back(l2_norm(sols[i].u_s - sols[i + 1].u_s));
    rep.re_diff.push_back(l2_norm(sols[i].u_e - sols[i + 1].u_e));
  }
  rep.rs_limit_norm = rep.rs_norm.back();
  rep.re_limit_norm = l2_norm(sols.back().u_e);

  const double fs_scale = sup_norm(f.s) + sup_norm(f.e);
  const double floor = 1e-13 * std::max(fs_scale, 1e-300);
  const std::span<const double> eps_all(rep.eps);
  const std::span<const double> eps_pairs = eps_all.first(rep.eps.size() - 1);

  if (rep.matched == LimitCase::Quadratic || rep.matched == LimitCase::ShortLinear)
    rep.rs_order = order_of(eps_all, rep.rs_norm, floor, spread_tol, "||R_s f||");
  else
    rep.rs_order = order_of(eps_pairs, rep.rs_diff, floor * std::max(rs_scale, 1.0), spread_tol,
                            "||R_s f - limit||");
  rep.re_order = order_of(eps_pairs, rep.re_diff, floor * std::max(re_scale, 1.0), spread_tol,
                          "||R_e f - limit||");

  if (rep.matched == LimitCase::Quadratic) {
    const cplx B = rank2_lead_functional(f.e, lambda);
    double err = 0.0;
    for (const auto& s : sols) err = std::max(err, std::abs(s.c_e - B));
    rep.lead_functional_error = err;
  }
  return rep;
}

}  // namespace shrinkedge
