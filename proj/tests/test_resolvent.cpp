#include <doctest.h>

#include <initializer_list>

#include <cmath>
#include <numbers>
#include <random>

#include "fixtures.hpp"
#include "shrinkedge/error.hpp"
#include "shrinkedge/resolvent.hpp"
#include "shrinkedge/secular.hpp"

using namespace shrinkedge;

namespace {

const std::vector<VertexCondition>& five_branches() {
  static const std::vector<VertexCondition> v{Rank2{}, Rank1{cplx{0.4, -1.2}, -0.7}, Rank1{std::nullopt, 0.8},
                                              Rank0{0.6, -1.5, cplx{0.3, 0.9}}, Rank0{0.0, 2.0, 0.0}};
  return v;
}

// Richardson-refined composite Simpson of -(1/k) int_0^x sin k(x - t) sin(pi t) dt on the direct kernel.
cplx reference_L_sin(cplx k, double x) {
  auto simpson = [&](int n) {
    const double h = x / n;
    cplx s{};
    for (int j = 0; j <= n; ++j) {
      const double t = j * h;
      const double w = (j == 0 || j == n) ? 1.0 : (j % 2 ? 4.0 : 2.0);
      s += w * std::sin(k * (x - t)) * std::sin(std::numbers::pi * t);
    }
    return s * h / 3.0;
  };
  const cplx s1 = simpson(2048), s2 = simpson(4096);
  return -(s2 + (s2 - s1) / 15.0) / k;
}

GridFunction constant(cplx v, std::size_t n) {
  return GridFunction::sample([v](double) { return v; }, n);
}

}  // namespace

TEST_SUITE("resolvent") {
  TEST_CASE("grid invariants") {
    CHECK_THROWS_AS(GridFunction(std::vector<cplx>(7)), Error);
    CHECK_THROWS_AS(GridFunction(std::vector<cplx>(10)), Error);
    CHECK_NOTHROW(GridFunction(std::vector<cplx>(9)));
    CHECK_THROWS_AS(GridFunction(std::vector<cplx>(9, cplx{NAN, 0.0})), Error);
  }

  TEST_CASE("principal branch") {
    CHECK(principal_sqrt(-1.0) == cplx{0.0, 1.0});
    CHECK(principal_sqrt(cplx{-1.0, -0.0}).imag() > 0.0);
    CHECK(principal_sqrt(cplx{2.0, -3.0}).imag() >= 0.0);
    const cplx k = principal_sqrt(cplx{2.0, 3.0});
    CHECK(std::abs(k * k - cplx{2.0, 3.0}) <= 1e-14);
  }

  TEST_CASE("apply_L") {
    const std::size_t n = 257;
    const auto zero = apply_L(GridFunction::zeros(n), cplx{0.0, 1.0});
    CHECK(sup_norm(zero) == 0.0);
    const auto one = apply_L(constant(1.0, n), 1.0);
    for (std::size_t j = 0; j < n; ++j) CHECK(std::abs(one[j] + (1.0 - std::cos(one.node(j)))) <= 1e-10);

    const cplx lam{0.0, 1.0};
    const auto f = GridFunction::sample([](double t) { return std::sin(std::numbers::pi * t); }, n);
    const auto Lf = apply_L(f, lam);
    for (std::size_t j : {std::size_t{16}, std::size_t{77}, std::size_t{128}, std::size_t{256}})
      CHECK(std::abs(Lf[j] - reference_L_sin(principal_sqrt(lam), Lf.node(j))) <= 1e-8);
  }

  TEST_CASE("apply_L_eps is O(eps^2)") {
    const std::size_t n = 257;
    const cplx lam{0.0, 1.0};
    const double s1 = sup_norm(apply_L_eps(constant(1.0, n), lam, 1e-3));
    CHECK(s1 <= 1e-5);
    const double s2 = sup_norm(apply_L_eps(constant(1.0, n), lam, 5e-4));
    CHECK(s1 / s2 >= 3.5);
    CHECK(s1 / s2 <= 4.5);
    CHECK(sup_norm(apply_L_eps(GridFunction::zeros(n), lam, 1e-3)) == 0.0);
  }

  TEST_CASE("boundary data") {
    const std::size_t n = 257;
    const auto bd0 = boundary_data({GridFunction::zeros(n), GridFunction::zeros(n)}, cplx{0, 1}, 1e-2);
    for (int i = 0; i < 2; ++i) {
      CHECK(bd0.W[i] == cplx{});
      CHECK(bd0.Wp[i] == cplx{});
    }
    const auto bd = boundary_data({GridFunction::zeros(n), constant(1.0, n)}, 1.0, 1e-2);
    CHECK(std::abs(bd.W[1] - (1.0 - std::cos(1.0))) <= 1e-10);
    const auto w1 = boundary_data({constant(1.0, n), GridFunction::zeros(n)}, cplx{0, 1}, 1e-2).W[0];
    const auto w2 = boundary_data({constant(1.0, n), GridFunction::zeros(n)}, cplx{0, 1}, 5e-3).W[0];
    CHECK(std::abs(w1 / w2) == doctest::Approx(4.0).epsilon(1e-3));
  }

  TEST_CASE("coefficient branches") {
    const double eps = 0.02;
    const cplx lam{2.0, 3.0}, k = principal_sqrt(lam);
    BoundaryData bd;
    bd.W = {cplx{0.3, 0.1}, cplx{-0.2, 0.5}};
    bd.Wp = {cplx{0.7, -0.4}, cplx{0.1, 0.9}};
    const auto [cs2, ce2] = coefficients(Rank2{}, bd, lam, eps);
    CHECK(std::abs(cs2 - bd.W[0] / std::cos(k * eps)) <= 1e-14);
    CHECK(std::abs(ce2 - bd.W[1] / std::sin(k)) <= 1e-14);
    const auto [csi, cei] = coefficients(Rank1{std::nullopt, 0.0}, bd, lam, eps);
    CHECK(std::abs(cei - bd.W[1] / std::sin(k)) <= 1e-14);
    CHECK(std::abs(csi - bd.Wp[0] / (k * std::sin(k * eps))) <= 1e-12);
    for (const auto& vc : five_branches()) {
      const auto [cs, ce] = coefficients(vc, BoundaryData{}, lam, eps);
      CHECK(cs == cplx{});
      CHECK(ce == cplx{});
    }
    const double pi2 = std::numbers::pi * std::numbers::pi;
    try {
      coefficients(Rank2{}, bd, pi2, eps);
      FAIL("expected NearPole");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NearPole);
    }
  }

  TEST_CASE("rank 2 decouples and matches the explicit lead functional") {
    std::mt19937_64 rng(1);
    const std::size_t n = 257;
    const cplx lam{2.0, 3.0}, k = principal_sqrt(lam);
    const auto fs = fixtures::random_smooth(rng, n), fe = fixtures::random_smooth(rng, n);
    const auto a = resolve(Rank2{}, 1e-2, lam, {fs, GridFunction::zeros(n)});
    CHECK(sup_norm(a.u_e) == 0.0);
    const auto b = resolve(Rank2{}, 1e-2, lam, {GridFunction::zeros(n), fe});
    const cplx B = rank2_lead_functional(fe, lam);
    const auto L = apply_L(fe, lam);
    for (std::size_t j = 0; j < n; ++j) CHECK(std::abs(b.u_e[j] - (L[j] + B * std::sin(k * L.node(j)))) <= 1e-10);
  }

  TEST_CASE("manufactured solution") {
    const std::size_t n = 513;
    const cplx lam{0.0, 1.0};
    auto v = [](double x) { return x * (1.0 - x) * (1.0 + x * x); };
    // -v'' - lam v with v'' = d^2/dx^2 (x + x^3 - x^2 - x^4) = 6x - 2 - 12x^2.
    const auto fe = GridFunction::sample([&](double x) { return -(6 * x - 2 - 12 * x * x) - lam * v(x); }, n);
    const Forcing f{GridFunction::zeros(n), fe};
    const auto sol = resolve(Rank2{}, 0.05, lam, f);
    for (std::size_t j = 0; j < n; ++j) CHECK(std::abs(sol.u_e[j] - v(sol.u_e.node(j))) <= 1e-9);
    CHECK(residual(Rank2{}, 0.05, lam, f, sol) <= 1e-9);
  }

  TEST_CASE("residual across all branches") {
    std::mt19937_64 rng(2);
    const std::size_t n = 513;
    for (const auto& vc : five_branches())
      for (cplx lam : {cplx{0, 1}, cplx{2, 3}, cplx{-1, 0.5}})
        for (double eps : {1e-1, 1e-3, 1e-6}) {
          const auto f = fixtures::random_forcing(rng, n);
          const auto sol = resolve(vc, eps, lam, f);
          CAPTURE(describe(vc));
          CAPTURE(lam);
          CAPTURE(eps);
          CHECK(residual(vc, eps, lam, f, sol) <= 1e-7);
          CHECK(std::abs(sol.u_e[0]) <= 1e-14);
        }
    const Forcing zero{GridFunction::zeros(n), GridFunction::zeros(n)};
    for (const auto& vc : five_branches()) CHECK(residual(vc, 0.01, cplx{0, 1}, zero, resolve(vc, 0.01, cplx{0, 1}, zero)) == 0.0);
  }

  TEST_CASE("linearity and symmetry") {
    std::mt19937_64 rng(3);
    const std::size_t n = 257;
    const double eps = 1e-2;
    for (const auto& vc : five_branches())
      for (cplx lam : {cplx{0, 1}, cplx{2, 3}}) {
        const auto f = fixtures::random_forcing(rng, n), g = fixtures::random_forcing(rng, n);
        const cplx al{0.3, -1.1}, be{2.0, 0.5};
        const Forcing h{al * f.s + be * g.s, al * f.e + be * g.e};
        const auto rf = resolve(vc, eps, lam, f), rg = resolve(vc, eps, lam, g), rh = resolve(vc, eps, lam, h);
        CHECK(std::abs(rh.c_s - (al * rf.c_s + be * rg.c_s)) <= 1e-12 * (1 + std::abs(rh.c_s)));
        CHECK(std::abs(rh.c_e - (al * rf.c_e + be * rg.c_e)) <= 1e-12 * (1 + std::abs(rh.c_e)));

        const auto rgc = resolve(vc, eps, std::conj(lam), g);
        const cplx lhs = weighted_inner(eps, rf.u_s, rf.u_e, g.s, g.e);
        const cplx rhs = weighted_inner(eps, f.s, f.e, rgc.u_s, rgc.u_e);
        CAPTURE(describe(vc));
        CHECK(std::abs(lhs - rhs) <= 1e-8 * std::abs(lhs));
      }
  }

  TEST_CASE("pole consistency near a negative eigenvalue") {
    const VertexCondition vc = Rank1{cplx{-1.0}, -2.0};
    const double eps = 1e-2;
    const double kappa = find_negative_eigenvalues(vc, eps).at(0).kappa;
    std::mt19937_64 rng(4);
    const auto f = fixtures::random_forcing(rng, 257);
    auto size = [&](double d) {
      const auto s = resolve(vc, eps, cplx{-kappa * kappa, d}, f, 1e-14);
      return std::abs(s.c_s) + std::abs(s.c_e);
    };
    CHECK(size(1e-4) / size(1e-3) == doctest::Approx(10.0).epsilon(0.2));
  }

  TEST_CASE("coefficients are analytic in eps") {
    std::mt19937_64 rng(6);
    const auto f = fixtures::random_forcing(rng, 257);
    for (const auto& vc : {VertexCondition{Rank1{cplx{-1.0}, 0.0}}, VertexCondition{Rank0{0.6, -1.5, cplx{0.3, 0.9}}}}) {
      auto ce = [&](double e) { return resolve(vc, e, cplx{0, 1}, f).c_e; };
      std::array<double, 5> x{};
      std::array<cplx, 5> y{};
      for (int i = 0; i < 5; ++i) {
        x[i] = 0.002 * (i + 1);
        y[i] = ce(x[i]);
      }
      for (int i = 0; i < 4; ++i) {
        const double t = 0.5 * (x[i] + x[i + 1]);
        cplx p{};
        for (int j = 0; j < 5; ++j) {
          double l = 1.0;
          for (int m = 0; m < 5; ++m)
            if (m != j) l *= (t - x[m]) / (x[j] - x[m]);
          p += l * y[j];
        }
        CHECK(std::abs(p - ce(t)) <= 1e-6 * std::abs(ce(t)));
      }
    }
  }

  TEST_CASE("leading orders") {
    std::mt19937_64 rng(8);
    const std::size_t n = 257;
    const cplx lam{0.0, 1.0};
    const auto fs = fixtures::random_smooth(rng, n), fe = fixtures::random_smooth(rng, n);
    const auto z = GridFunction::zeros(n);
    const std::vector<double> eps{1e-2, 5e-3, 2.5e-3, 1.25e-3, 6.25e-4};

    const auto r2 = leading_order_probe(Rank2{}, lam, {fs, z}, eps);
    CHECK(r2.matched == LimitCase::Quadratic);
    CHECK(r2.rs_order == doctest::Approx(2.0).epsilon(0.1));
    const auto r2e = leading_order_probe(Rank2{}, lam, {z, fe}, eps);
    REQUIRE(r2e.lead_functional_error);
    CHECK(*r2e.lead_functional_error <= 1e-6);
    CHECK(std::isinf(r2e.re_order));

    const auto sl = leading_order_probe(Rank1{std::nullopt, -1.0}, lam, {fs, z}, eps);
    CHECK(sl.matched == LimitCase::ShortLinear);
    CHECK(sl.rs_order == doctest::Approx(1.0).epsilon(0.1));

    const auto res = leading_order_probe(Rank0{0.0, 0.0, 0.0}, lam, {fs, z}, eps);
    CHECK(res.matched == LimitCase::Resonant);
    CHECK(res.rs_limit_norm > 1e-2);
    const auto res0 = leading_order_probe(Rank0{0.0, 0.0, 0.0}, lam, {z, fe}, eps);
    CHECK(res0.rs_limit_norm == 0.0);

    const auto ld = leading_order_probe(Rank1{cplx{-1.0}, 0.0}, lam, {z, fe}, eps);
    CHECK(ld.matched == LimitCase::LeadDriven);
    CHECK(ld.rs_limit_norm > 1e-2);
    CHECK(ld.rs_order == doctest::Approx(1.0).epsilon(0.2));

    CHECK_THROWS_AS(leading_order_probe(Rank2{}, lam, {fs, z}, std::span(eps).first(3)), Error);
  }
}
