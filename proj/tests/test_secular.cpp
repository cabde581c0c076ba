#include <doctest.h>

#include <initializer_list>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "shrinkedge/error.hpp"
#include "shrinkedge/secular.hpp"

using namespace shrinkedge;

namespace {

// Negative-spectrum determinant written with plain long-double cosh/sinh,
// multiplied out (no division), for moderate kappa.
long double direct_det(const VertexCondition& vc, long double eps, long double k) {
  const long double ch = std::cosh(k), sh = std::sinh(k), che = std::cosh(k * eps), she = std::sinh(k * eps);
  if (const auto* r = std::get_if<Rank1>(&vc)) {
    if (r->z_infinite()) return k * she + r->mu * che;
    const long double z2 = std::norm(*r->z);
    return k * ch * che + z2 * k * she * sh + r->mu * (1 + z2) * sh * che;
  }
  const auto& r = std::get<Rank0>(vc);
  return (k * she + r.a * che) * (k * ch + r.b * sh) - std::norm(r.c) * sh * che;
}

// All sign changes on (0, kmax] by a fine scan, refined by bisection.
std::vector<double> oracle_roots(const VertexCondition& vc, double eps, double kmax) {
  std::vector<double> out;
  const long double step = 1e-3L;
  long double k0 = 1e-6L;
  long double f0 = direct_det(vc, eps, k0);
  for (long double k = k0 + step; k <= kmax; k += step) {
    const long double f = direct_det(vc, eps, k);
    if ((f < 0) != (f0 < 0))
      out.push_back(static_cast<double>(
          oracle::bisect([&](long double x) { return direct_det(vc, eps, x); }, k - step, k)));
    f0 = f;
  }
  return out;
}

}  // namespace

TEST_SUITE("secular") {
  TEST_CASE("roots agree with the direct-determinant oracle") {
    const std::vector<VertexCondition> cases{
        Rank0{0.0, 0.0, -1.0},          Rank1{std::nullopt, -1.0},   Rank1{cplx{-1.0}, -2.0},
        Rank0{-1.0, -3.0, 0.0},         Rank0{1.0, 0.0, 2.0},        Rank0{0.0, -3.0, 0.0},
        Rank0{-0.5, 2.0, cplx{0.3, 1.0}}, Rank0{-2.0, -4.0, cplx{0.5, -0.5}}, Rank1{cplx{0.5, 0.5}, -3.0},
        Rank0{0.0, 1.0, cplx{0.0, 2.0}}};
    for (const auto& vc : cases)
      for (double eps : {1e-2, 1e-3}) {
        CAPTURE(describe(vc));
        CAPTURE(eps);
        const auto got = find_negative_eigenvalues(vc, eps);
        const auto ref = oracle_roots(vc, eps, 60.0);
        REQUIRE(got.size() == ref.size());
        for (std::size_t i = 0; i < ref.size(); ++i) {
          CHECK(got[i].kappa == doctest::Approx(ref[i]).epsilon(1e-11));
          CHECK(got[i].lambda == doctest::Approx(-ref[i] * ref[i]).epsilon(1e-10));
          CHECK(std::abs(secular_neg(vc, eps, got[i].kappa)) <= 1e-10);
        }
      }
  }

  TEST_CASE("types follow the predicted rows") {
    auto pts = find_negative_eigenvalues(Rank0{-1.0, -3.0, 0.0}, 1e-4);
    REQUIRE(pts.size() == 2);
    CHECK(*pts[0].kind == Kind::B);
    CHECK(pts[0].kappa == doctest::Approx(oracle::kCoth3).epsilon(1e-3));
    CHECK(*pts[1].kind == Kind::S);
    CHECK(pts[1].lambda * 1e-4 == doctest::Approx(-1.0).epsilon(0.02));
    pts = find_negative_eigenvalues(Rank0{0.0, 0.0, -1.0}, 1e-6);
    REQUIRE(pts.size() == 1);
    CHECK(*pts[0].kind == Kind::C);
    CHECK(pts[0].lambda * 1e-4 == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(find_negative_eigenvalues(Rank2{}, 1e-3).empty());
    CHECK(find_negative_eigenvalues(Rank1{cplx{1.0}, -0.5}, 1e-3).empty());
  }

  TEST_CASE("extreme eps stays finite and counted") {
    for (double eps : {1e-6, 1e-8}) {
      const auto s = find_negative_eigenvalues(Rank1{std::nullopt, -1.0}, eps);
      REQUIRE(s.size() == 1);
      CHECK(s[0].lambda * eps == doctest::Approx(-1.0).epsilon(1e-4));
      const auto two = find_negative_eigenvalues(Rank0{-1.0, -3.0, cplx{0.2, 0.1}}, eps);
      CHECK(two.size() == 2);
    }
  }

  TEST_CASE("type-C second-order coefficient -b/3") {
    for (double b : {-2.0, 1.0, 3.0}) {
      const Rank0 vc{0.0, b, -1.0};
      auto D = [&](double nu) {
        const auto p = find_negative_eigenvalues(vc, nu * nu * nu);
        return (p.at(0).kappa * nu - 1.0) / nu;
      };
      const double nu = 2e-3;
      const double beta = 2.0 * D(nu / 2) - D(nu);
      CAPTURE(b);
      CHECK(beta == doctest::Approx(-b / 3.0).epsilon(0.1));
    }
  }

  TEST_CASE("input validation") {
    CHECK_THROWS_AS(find_negative_eigenvalues(Rank2{}, 0.0), Error);
    CHECK_THROWS_AS(find_negative_eigenvalues(Rank2{}, 0.3), Error);
    CHECK_THROWS_AS(make_spectral_point(1e-3, -1.0), Error);
  }

  TEST_CASE("g0 and h0 vanish at the negative eigenvalues") {
    const double eps = 1e-2;
    const auto p = find_negative_eigenvalues(Rank1{cplx{-1.0}, -2.0}, eps).at(0);
    const cplx k{0.0, p.kappa};
    const double scale = std::cosh(p.kappa) * p.kappa * 10;
    CHECK(std::abs(g0(eps, k, cplx{-1.0}, -2.0)) <= 1e-10 * scale);
    const auto q = find_negative_eigenvalues(Rank0{0.0, 0.0, -1.0}, eps).at(0);
    CHECK(std::abs(h0(eps, cplx{0.0, q.kappa}, 0.0, 0.0, -1.0)) <= 1e-10 * std::cosh(q.kappa) * q.kappa * q.kappa);
  }

  TEST_CASE("real poles") {
    const double eps = 0.06;
    const auto poles = scan_real_poles(Rank2{}, eps, 40.0);
    std::vector<double> expected;
    for (int n = 1; n * std::numbers::pi <= 40.0; ++n) expected.push_back(n * std::numbers::pi);
    for (int m = 0; (m + 0.5) * std::numbers::pi / eps <= 40.0; ++m) expected.push_back((m + 0.5) * std::numbers::pi / eps);
    std::sort(expected.begin(), expected.end());
    REQUIRE(poles.size() == expected.size());
    for (std::size_t i = 0; i < poles.size(); ++i) CHECK(poles[i] == doctest::Approx(expected[i]).epsilon(1e-12));

    const VertexCondition nk = Rank1{cplx{-1.0}, 0.0};
    for (double k : scan_real_poles(nk, eps, 50.0))
      CHECK(std::abs(pole_function(nk, eps, k)) <= 1e-10 * pole_function_scale(nk, eps, k));
    const VertexCondition r0 = Rank0{0.5, -1.0, cplx{0.0, 1.0}};
    const auto p0 = scan_real_poles(r0, eps, 50.0);
    CHECK(p0.size() >= 14);
    for (double k : p0) CHECK(std::abs(pole_function(r0, eps, k)) <= 1e-10 * pole_function_scale(r0, eps, k));
    CHECK_THROWS_AS(scan_real_poles(r0, eps, 1e6), Error);
  }

  TEST_CASE("rate fitting") {
    std::vector<SpectralPoint> pts;
    for (int i = 0; i < 6; ++i) {
      const double e = std::pow(10.0, -2.0 - i);
      pts.push_back(make_spectral_point(e, std::sqrt(2.0 / e) * (1 + e), Kind::S, 2.0));
    }
    const auto f = fit_rate(pts);
    CHECK(f.slope == doctest::Approx(-1.0).epsilon(0.01));
    CHECK(f.rounded_slope == -1.0);
    CHECK(f.coeff == doctest::Approx(2.0).epsilon(1e-3));

    std::vector<SpectralPoint> bad;
    for (int i = 0; i < 5; ++i) {
      const double e = std::pow(10.0, -2.0 - i);
      bad.push_back(make_spectral_point(e, std::pow(e, -0.2), Kind::S));
    }
    try {
      fit_rate(bad);
      FAIL("expected AmbiguousRate");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::AmbiguousRate);
    }
    CHECK_THROWS_AS(fit_rate(std::span(pts).first(3)), Error);
  }
}
