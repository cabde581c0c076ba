#include "shrinkedge/grid.hpp"

#include <algorithm>
#include <cmath>

#include "shrinkedge/error.hpp"

namespace shrinkedge {

GridFunction::GridFunction(std::vector<cplx> values) : values_(std::move(values)) {
  if (values_.size() < 9 || values_.size() % 2 == 0)
    throw Error(ErrorCode::GridTooCoarse,
                "grid needs an odd node count >= 9, got " + std::to_string(values_.size()));
  for (const auto& v : values_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw Error(ErrorCode::InvalidInput, "grid values must be finite");
}

GridFunction GridFunction::zeros(std::size_t n) { return GridFunction(std::vector<cplx>(n)); }

GridFunction operator+(const GridFunction& u, const GridFunction& v) {
  if (u.n() != v.n()) throw Error(ErrorCode::InvalidInput, "grid sizes differ");
  std::vector<cplx> w(u.n());
  for (std::size_t j = 0; j < u.n(); ++j) w[j] = u[j] + v[j];
  return GridFunction(std::move(w));
}

GridFunction operator-(const GridFunction& u, const GridFunction& v) { return u + cplx{-1.0} * v; }

GridFunction operator*(cplx s, const GridFunction& u) {
  std::vector<cplx> w(u.values().begin(), u.values().end());
  for (auto& x : w) x *= s;
  return GridFunction(std::move(w));
}

cplx simpson(std::span<const cplx> g, double h) {
  cplx sum = g.front() + g.back();
  for (std::size_t j = 1; j + 1 < g.size(); ++j) sum += (j % 2 ? 4.0 : 2.0) * g[j];
  return sum * (h / 3.0);
}

std::vector<cplx> cumulative_simpson(std::span<const cplx> g, double h) {
  std::vector<cplx> out(g.size());
  for (std::size_t j = 0; j + 2 < g.size(); j += 2) {
    out[j + 1] = out[j] + (h / 12.0) * (5.0 * g[j] + 8.0 * g[j + 1] - g[j + 2]);
    out[j + 2] = out[j] + (h / 3.0) * (g[j] + 4.0 * g[j + 1] + g[j + 2]);
  }
  return out;
}

cplx inner(const GridFunction& u, const GridFunction& v) {
  if (u.n() != v.n()) throw Error(ErrorCode::InvalidInput, "grid sizes differ");
  std::vector<cplx> w(u.n());
  for (std::size_t j = 0; j < u.n(); ++j) w[j] = u[j] * std::conj(v[j]);
  return simpson(w, u.h());
}

double l2_norm(const GridFunction& u) { return std::sqrt(std::max(0.0, inner(u, u).real())); }

double sup_norm(const GridFunction& u) {
  double m = 0.0;
  for (const auto& v : u.values()) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace shrinkedge
