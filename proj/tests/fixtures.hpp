#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "shrinkedge/grid.hpp"
#include "shrinkedge/resolvent.hpp"

namespace fixtures {

using shrinkedge::cplx;

// Random trigonometric polynomial of low degree with complex coefficients.
inline shrinkedge::GridFunction random_smooth(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g;
  std::array<cplx, 4> a{}, b{};
  for (int m = 0; m < 4; ++m) {
    a[m] = cplx{g(rng), g(rng)} / double(m + 1);
    b[m] = cplx{g(rng), g(rng)} / double(m + 1);
  }
  return shrinkedge::GridFunction::sample(
      [&](double t) {
        cplx v{};
        for (int m = 0; m < 4; ++m)
          v += a[m] * std::cos(m * std::numbers::pi * t) + b[m] * std::sin((m + 1) * std::numbers::pi * t);
        return v;
      },
      n);
}

inline shrinkedge::Forcing random_forcing(std::mt19937_64& rng, std::size_t n) {
  auto s = random_smooth(rng, n);
  auto e = random_smooth(rng, n);
  return {std::move(s), std::move(e)};
}

}  // namespace fixtures
