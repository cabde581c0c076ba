#include <doctest.h>

#include <initializer_list>

#include <cmath>
#include <algorithm>
#include <numbers>

#include "shrinkedge/counting.hpp"
#include "shrinkedge/error.hpp"
#include "shrinkedge/fd_oracle.hpp"
#include "shrinkedge/secular.hpp"

using namespace shrinkedge;

TEST_SUITE("fd_oracle") {
  TEST_CASE("assembly shapes") {
    CHECK_THROWS_AS(assemble(Rank2{}, 0.1, 15, 100), Error);
    const auto r2 = assemble(Rank2{}, 0.1, 100, 200);
    CHECK(r2.vertex_dofs == 0);
    CHECK(r2.size() == 99 + 198);
    CHECK(r2.k_off[98] == cplx{});  // edges decoupled
    const auto r0 = assemble(Rank0{1.0, 2.0, cplx{0.0, 1.0}}, 0.1, 100, 200);
    CHECK(r0.vertex_dofs == 2);
    CHECK(r0.k_off[99] == cplx{0.0, 1.0});
    const auto r1 = assemble(Rank1{cplx{0.5, 0.5}, 1.0}, 0.1, 100, 200);
    CHECK(r1.vertex_dofs == 1);
    for (std::size_t i = 0; i < r1.size(); ++i) CHECK(r1.m_diag[i] > 0.0);
  }

  TEST_CASE("rank 2 decouples into the two Dirichlet problems") {
    const double eps = 0.1;
    const auto op = assemble(Rank2{}, eps, 400, 2000);
    const auto ev = lowest_eigenvalues(op, 2);
    const double pi2 = std::numbers::pi * std::numbers::pi;
    CHECK(ev[0] == doctest::Approx(pi2).epsilon(1e-5));
    CHECK(ev[1] == doctest::Approx(4 * pi2).epsilon(1e-5));
    CHECK(negative_inertia(op) == 0);
  }

  TEST_CASE("agreement with secular roots and counts") {
    const std::vector<VertexCondition> cases{Rank0{0.0, 0.0, -1.0}, Rank1{cplx{-1.0}, -2.0}, Rank1{std::nullopt, -1.0},
                                             Rank0{-1.0, -3.0, 0.0}, Rank0{0.5, 0.0, cplx{1.0, 1.0}}};
    for (const auto& vc : cases)
      for (double eps : {1e-1, 1e-2}) {
        auto roots = find_negative_eigenvalues(vc, eps);
        std::sort(roots.begin(), roots.end(), [](const auto& x, const auto& y) { return x.lambda < y.lambda; });
        const auto op = assemble(vc, eps, 1000, 1000);
        CAPTURE(describe(vc));
        CAPTURE(eps);
        CHECK(negative_inertia(op) == roots.size());
        CHECK(static_cast<int>(negative_inertia(op)) == expected_negative_count(vc));
        const auto ev = lowest_eigenvalues(op, roots.size());
        for (std::size_t i = 0; i < roots.size(); ++i) {
          CHECK(ev[i] >= roots[i].lambda);  // Rayleigh-Ritz upper bound
          CHECK(ev[i] == doctest::Approx(roots[i].lambda).epsilon(5e-3));
        }
      }
  }

  TEST_CASE("monotone under refinement") {
    const VertexCondition vc = Rank0{0.0, 0.0, -1.0};
    double prev = INFINITY;
    for (std::size_t n : {64, 128, 256, 512}) {
      const double l = lowest_eigenvalues(assemble(vc, 1e-2, n, n), 1)[0];
      CHECK(l <= prev);
      prev = l;
    }
  }

  TEST_CASE("second-order convergence") {
    using Mesh = std::pair<std::size_t, std::size_t>;
    const std::vector<Mesh> ladder{{65, 65}, {129, 129}, {257, 257}};
    CHECK(convergence_order(Rank2{}, 0.1, ladder, std::numbers::pi * std::numbers::pi) ==
          doctest::Approx(2.0).epsilon(0.15));
    const VertexCondition b = Rank1{cplx{-1.0}, -2.0};
    CHECK(convergence_order(b, 1e-2, ladder, find_negative_eigenvalues(b, 1e-2)[0].lambda) ==
          doctest::Approx(2.0).epsilon(0.15));
    const VertexCondition s = Rank1{std::nullopt, -1.0};
    CHECK(convergence_order(s, 1e-2, ladder, find_negative_eigenvalues(s, 1e-2)[0].lambda) ==
          doctest::Approx(2.0).epsilon(0.25));
    CHECK(convergence_order(Rank2{}, 0.1, ladder) == doctest::Approx(2.0).epsilon(0.15));
  }

  TEST_CASE("bottom of the spectrum scales like -1/eps") {
    const VertexCondition vc = Rank1{std::nullopt, -1.0};
    for (double eps : {1e-1, 1e-2, 1e-3}) {
      const double l = lowest_eigenvalues(assemble(vc, eps, 200, 200), 1)[0];
      CHECK(l >= -2.0 / eps);
    }
  }

  TEST_CASE("too many eigenvalues requested") {
    CHECK_THROWS_AS(lowest_eigenvalues(assemble(Rank2{}, 0.1, 32, 32), 7), Error);
  }

  TEST_CASE("exact zero eigenvalue is not counted as negative") {
    // a = c = 0 leaves a free Neumann short edge: constants have zero energy.
    const auto op = assemble(Rank0{0.0, -3.0, 0.0}, 1e-2, 400, 400);
    CHECK(negative_inertia(op) == 1);
    CHECK(count_below(op, 1e-6) == 2);
  }
}
