#include "shrinkedge/secular.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "shrinkedge/counting.hpp"
#include "shrinkedge/detail/overloaded.hpp"
#include "shrinkedge/error.hpp"
#include "shrinkedge/hyperbolic.hpp"
#include "shrinkedge/roots.hpp"

namespace shrinkedge {

using detail::overloaded;

SpectralPoint make_spectral_point(double epsilon, double kappa, std::optional<Kind> kind,
                                  std::optional<double> alpha) {
  if (!(epsilon > 0.0) || !(kappa > 0.0))
    throw Error(ErrorCode::InvalidInput, "spectral point needs eps > 0 and kappa > 0");
  return {epsilon, kappa, -kappa * kappa, kind, alpha};
}

cplx g0(double eps, cplx k, cplx z, double mu) {
  const double z2 = std::norm(z);
  const cplx ke = k * eps;
  return (k * std::cos(k) + mu * std::sin(k)) * std::cos(ke) - z2 * (k * std::sin(ke) - mu * std::cos(ke)) * std::sin(k);
}

cplx h0(double eps, cplx k, double a, double b, cplx c) {
  const cplx ke = k * eps;
  return -(k * std::sin(ke) - a * std::cos(ke)) * (k * std::cos(k) + b * std::sin(k)) -
         std::norm(c) * std::sin(k) * std::cos(ke);
}

namespace {

// kappa tanh(kappa eps)
double kt(double kappa, double eps) { return kappa * std::tanh(kappa * eps); }

double rank0_secular(const Rank0& r, double eps, double kappa) {
  return (kt(kappa, eps) + r.a) * (hyp::x_coth(kappa) + r.b) - std::norm(r.c);
}

double rank1_secular(const Rank1& r, double eps, double kappa) {
  if (r.z_infinite()) return kt(kappa, eps) + r.mu;
  const double z2 = r.z_abs2();
  return hyp::x_coth(kappa) + z2 * kt(kappa, eps) + r.mu * (1.0 + z2);
}

void check_eps(double eps) {
  if (!(eps > 0.0 && eps <= 0.2)) {
    std::ostringstream os;
    os << "eps must lie in (0, 0.2], got " << eps;
    throw Error(ErrorCode::InvalidInput, os.str());
  }
}

[[noreturn]] void count_mismatch(const VertexCondition& vc, double eps, std::size_t found, int expected) {
  std::ostringstream os;
  os << describe(vc) << " at eps=" << eps << ": located " << found << " negative eigenvalue(s), expected "
     << expected;
  throw Error(ErrorCode::CountMismatch, os.str());
}

// Bisection inside a chart kappa = scale * t with the given t-bracket; falls
// back to None when the chart bracket shows no sign change.
template <class F>
std::optional<double> chart_root(F&& f, double scale, Bracket t_bracket) {
  auto g = [&](double t) { return f(scale * t); };
  auto t = bisect(g, t_bracket);
  if (!t) return std::nullopt;
  return scale * *t;
}

// Root of an increasing f on (lo, inf) with f(lo) < 0.
template <class F>
double increasing_root(F&& f, double lo, double hi_guess) {
  auto hi = expand_upper(f, std::max(hi_guess, lo + 1.0));
  if (!hi) throw Error(ErrorCode::NoRoot, "failed to bracket an increasing secular branch");
  return *bisect(f, {lo, *hi});
}

// Endpoints that are analytically >= 0 but only by rounding-level margins
// (z = 0, tiny eps) are pushed up until the sign is unambiguous.
template <class F>
double nudge_up(F&& f, double hi) {
  double h = hi;
  for (double d = 1e-13; f(h) < 0.0 && d < 1.0; d *= 4.0) h = hi * (1.0 + d) + d;
  return h;
}

}  // namespace

double secular_neg(const VertexCondition& vc, double eps, double kappa) {
  return std::visit(overloaded{[](const Rank2&) { return 1.0; },
                               [&](const Rank1& r) { return rank1_secular(r, eps, kappa); },
                               [&](const Rank0& r) { return rank0_secular(r, eps, kappa); }},
                    vc);
}

std::vector<SpectralPoint> find_negative_eigenvalues(const VertexCondition& vc_in, double eps) {
  check_eps(eps);
  const VertexCondition vc = validate(vc_in);
  const auto predictions = classify(vc);
  auto alpha_of = [&predictions](Kind k) -> std::optional<double> {
    for (const auto& p : predictions)
      if (p.kind == k) return p.alpha;
    return std::nullopt;
  };

  std::vector<SpectralPoint> out;
  auto push = [&](double kappa, Kind kind) { out.push_back(make_spectral_point(eps, kappa, kind, alpha_of(kind))); };
  const double sqrt_eps = std::sqrt(eps);

  std::visit(
      overloaded{
          [](const Rank2&) {},
          [&](const Rank1& r) {
            auto f = [&](double k) { return rank1_secular(r, eps, k); };
            if (r.z_infinite()) {
              if (r.mu >= 0.0) return;
              // rho chart: kappa = rho / sqrt(eps), rho near sqrt(-mu).
              const double rho0 = std::sqrt(-r.mu);
              auto root = chart_root(f, 1.0 / sqrt_eps, {0.5 * rho0, 2.0 * rho0});
              push(root ? *root : increasing_root(f, 0.0, 2.0 * rho0 / sqrt_eps), Kind::S);
              return;
            }
            if (-r.mu * (1.0 + r.z_abs2()) <= 1.0) return;
            // The eps term only raises the left side, so the root sits in (0, kappa1].
            const double k1 = solve_kappa1(r.z, r.mu);
            push(*bisect(f, {0.0, nudge_up(f, k1)}), Kind::B);
          },
          [&](const Rank0& r) {
            auto f = [&](double k) { return rank0_secular(r, eps, k); };
            const double c2 = std::norm(r.c);
            if (c2 == 0.0) {
              // F factors as (kappa tanh kappa eps + a)(kappa coth kappa + b).
              if (-r.b > 1.0) push(solve_x_coth(-r.b), Kind::B);
              if (r.a < 0.0) {
                auto g = [&](double k) { return kt(k, eps) + r.a; };
                const double rho0 = std::sqrt(-r.a);
                auto root = chart_root(g, 1.0 / sqrt_eps, {0.5 * rho0, 2.0 * rho0});
                push(root ? *root : increasing_root(g, 0.0, 2.0 * rho0 / sqrt_eps), Kind::S);
              }
              return;
            }
            if (r.a > 0.0) {
              // F / (kappa tanh kappa eps + a) is increasing and nonnegative at kappa0.
              if (c2 <= r.a * (r.b + 1.0)) return;
              const double k0 = solve_kappa0(r.a, r.b, r.c);
              push(*bisect(f, {0.0, nudge_up(f, k0)}), Kind::B);
              return;
            }
            if (r.a == 0.0) {
              // tau chart: kappa = tau eps^{-1/3}, tau near |c|^{2/3}.
              const double tau0 = std::pow(c2, 1.0 / 3.0);
              const double scale = std::pow(eps, -1.0 / 3.0);
              auto root = chart_root(f, scale, {0.5 * tau0, 2.0 * tau0});
              push(root ? *root : increasing_root(f, 0.0, 2.0 * tau0 * scale), Kind::C);
              return;
            }
            // a < 0. kappa_star splits the half-line: kappa tanh kappa eps + a < 0
            // below it, > 0 above it, and F(kappa_star) = -|c|^2 < 0.
            auto g = [&](double k) { return kt(k, eps) + r.a; };
            const double rho0 = std::sqrt(-r.a);
            auto star = chart_root(g, 1.0 / sqrt_eps, {0.5 * rho0, 2.0 * rho0});
            const double kappa_star = star ? *star : increasing_root(g, 0.0, 2.0 * rho0 / sqrt_eps);

            if (c2 < r.a * (r.b + 1.0)) {
              // Bounded root in (0, kappa_star); F(0+) = a(b+1) - |c|^2 > 0.
              const double k0 = solve_kappa0(r.a, r.b, r.c);
              double hi = k0 + 1.0;
              if (hi >= kappa_star || f(hi) >= 0.0) hi = kappa_star;
              push(*bisect(f, {0.0, hi}), Kind::B);
            }
            const double rho_hi = 2.0 * rho0 / sqrt_eps;
            auto root = rho_hi > kappa_star ? bisect(f, {kappa_star, rho_hi}) : std::nullopt;
            push(root ? *root : increasing_root(f, kappa_star, rho_hi), Kind::S);
          }},
      vc);

  std::sort(out.begin(), out.end(), [](const SpectralPoint& x, const SpectralPoint& y) { return x.kappa < y.kappa; });
  for (std::size_t i = 1; i < out.size(); ++i)
    if (out[i].kappa - out[i - 1].kappa <= 1e-8 * out[i].kappa) {
      std::ostringstream os;
      os << describe(vc) << " at eps=" << eps << ": roots " << out[i - 1].kappa << " and " << out[i].kappa
         << " collide; eps is outside the asymptotic regime";
      throw Error(ErrorCode::CountMismatch, os.str());
    }
  const int expected = expected_negative_count(vc);
  if (static_cast<int>(out.size()) != expected) count_mismatch(vc, eps, out.size(), expected);
  return out;
}

double pole_function(const VertexCondition& vc, double eps, double k) {
  return std::visit(overloaded{[&](const Rank2&) { return std::cos(k * eps) * std::sin(k); },
                               [&](const Rank1& r) {
                                 if (r.z_infinite())
                                   return (k * std::sin(k * eps) - r.mu * std::cos(k * eps)) * std::sin(k);
                                 return g0(eps, k, *r.z, r.mu).real();
                               },
                               [&](const Rank0& r) { return h0(eps, k, r.a, r.b, r.c).real(); }},
                    vc);
}

double pole_function_scale(const VertexCondition& vc, double eps, double k) {
  (void)eps;
  const double ak = std::abs(k);
  return std::visit(overloaded{[](const Rank2&) { return 1.0; },
                               [&](const Rank1& r) {
                                 if (r.z_infinite()) return ak + std::abs(r.mu);
                                 return (ak + std::abs(r.mu)) * (1.0 + r.z_abs2());
                               },
                               [&](const Rank0& r) {
                                 return (ak + std::abs(r.a)) * (ak + std::abs(r.b)) + std::norm(r.c);
                               }},
                    vc);
}

namespace {

template <class F>
void scan_sign_changes(F&& f, double k_max, double step, std::vector<double>& roots) {
  double k_prev = 1e-9 * step;
  double f_prev = f(k_prev);
  const auto n = static_cast<long>(std::ceil(k_max / step));
  for (long i = 1; i <= n; ++i) {
    const double k = std::min(k_max, i * step);
    const double fk = f(k);
    if (fk == 0.0) {
      roots.push_back(k);
    } else if (f_prev != 0.0 && std::signbit(fk) != std::signbit(f_prev)) {
      roots.push_back(*bisect(f, {k_prev, k}));
    }
    k_prev = k;
    f_prev = fk;
  }
}

void push_arithmetic(std::vector<double>& roots, double offset, double spacing, double k_max) {
  for (long n = 0;; ++n) {
    const double k = offset + n * spacing;
    if (k > k_max) break;
    if (k > 0.0) roots.push_back(k);
  }
}

}  // namespace

std::vector<double> scan_real_poles(const VertexCondition& vc_in, double eps, double k_max) {
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidInput, "eps must be positive");
  if (!(k_max > 0.0) || k_max > 200.0 / eps) throw Error(ErrorCode::InvalidInput, "k_max must lie in (0, 200/eps]");
  const VertexCondition vc = validate(vc_in);
  constexpr double pi = std::numbers::pi;
  // sin k has zero spacing pi and cos(k eps) has 1/eps times that; both are
  // resolved by a step of pi/16 for eps < 1.
  const double step = std::min(pi / 16.0, pi / (16.0 * eps));

  std::vector<double> roots;
  std::visit(overloaded{[&](const Rank2&) {
                          push_arithmetic(roots, pi, pi, k_max);
                          push_arithmetic(roots, 0.5 * pi / eps, pi / eps, k_max);
                        },
                        [&](const Rank1& r) {
                          if (r.z_infinite()) {
                            push_arithmetic(roots, pi, pi, k_max);
                            scan_sign_changes(
                                [&](double k) { return k * std::sin(k * eps) - r.mu * std::cos(k * eps); }, k_max,
                                step, roots);
                            return;
                          }
                          scan_sign_changes([&](double k) { return g0(eps, k, *r.z, r.mu).real(); }, k_max, step,
                                            roots);
                        },
                        [&](const Rank0& r) {
                          if (r.a == 0.0 && r.c == cplx{}) {
                            push_arithmetic(roots, pi / eps, pi / eps, k_max);
                            scan_sign_changes([&](double k) { return k * std::cos(k) + r.b * std::sin(k); }, k_max,
                                              step, roots);
                            return;
                          }
                          scan_sign_changes([&](double k) { return h0(eps, k, r.a, r.b, r.c).real(); }, k_max, step,
                                            roots);
                        }},
             vc);

  std::sort(roots.begin(), roots.end());
  std::vector<double> unique;
  for (double k : roots)
    if (unique.empty() || k - unique.back() > 1e-12 * k) unique.push_back(k);
  return unique;
}

RateFit fit_rate(std::span<const SpectralPoint> points) {
  if (points.size() < 4) throw Error(ErrorCode::InvalidInput, "rate fit needs at least four points");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].kind != points[0].kind) throw Error(ErrorCode::InvalidInput, "rate fit mixes eigenvalue kinds");
    for (std::size_t j = 0; j < i; ++j)
      if (points[i].epsilon == points[j].epsilon) throw Error(ErrorCode::InvalidInput, "rate fit needs distinct eps");
  }

  const double n = static_cast<double>(points.size());
  double sx = 0, sy = 0;
  for (const auto& p : points) {
    sx += std::log(p.epsilon);
    sy += std::log(std::abs(p.lambda));
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (const auto& p : points) {
    const double dx = std::log(p.epsilon) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(std::abs(p.lambda)) - my);
  }
  RateFit fit;
  fit.slope = sxy / sxx;
  const double intercept = my - fit.slope * mx;
  double ss = 0;
  for (const auto& p : points) {
    const double r = std::log(std::abs(p.lambda)) - (intercept + fit.slope * std::log(p.epsilon));
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);

  const double admissible[] = {0.0, -2.0 / 3.0, -1.0};
  double best = admissible[0];
  for (double a : admissible)
    if (std::abs(fit.slope - a) < std::abs(fit.slope - best)) best = a;
  if (std::abs(fit.slope - best) > 0.15) {
    std::ostringstream os;
    os << "fitted slope " << fit.slope << " is not within 0.15 of 0, -2/3 or -1";
    throw Error(ErrorCode::AmbiguousRate, os.str());
  }
  fit.rounded_slope = best;

  std::vector<double> coeffs;
  for (const auto& p : points) coeffs.push_back(std::abs(p.lambda) * std::pow(p.epsilon, -best));
  std::sort(coeffs.begin(), coeffs.end());
  const std::size_t m = coeffs.size() / 2;
  fit.coeff = coeffs.size() % 2 ? coeffs[m] : 0.5 * (coeffs[m - 1] + coeffs[m]);
  return fit;
}

}  // namespace shrinkedge
