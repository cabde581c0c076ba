#pragma once

#include <complex>
#include <span>
#include <vector>

namespace shrinkedge {

using cplx = std::complex<double>;

/// Samples of a complex function on [0, 1] at x_j = j / (n - 1). n is odd and
/// at least 9 so composite Simpson applies.
class GridFunction {
 public:
  explicit GridFunction(std::vector<cplx> values);

  static GridFunction zeros(std::size_t n);

  template <class F>
  static GridFunction sample(F&& fn, std::size_t n) {
    std::vector<cplx> v(n);
    for (std::size_t j = 0; j < n; ++j) v[j] = fn(static_cast<double>(j) / static_cast<double>(n - 1));
    return GridFunction(std::move(v));
  }

  std::size_t n() const { return values_.size(); }
  double h() const { return 1.0 / static_cast<double>(values_.size() - 1); }
  double node(std::size_t j) const { return static_cast<double>(j) * h(); }

  std::span<const cplx> values() const { return values_; }
  const cplx& operator[](std::size_t j) const { return values_[j]; }
  cplx& operator[](std::size_t j) { return values_[j]; }
  const cplx& back() const { return values_.back(); }

 private:
  std::vector<cplx> values_;
};

GridFunction operator+(const GridFunction& u, const GridFunction& v);
GridFunction operator-(const GridFunction& u, const GridFunction& v);
GridFunction operator*(cplx s, const GridFunction& u);

/// Composite Simpson over the whole grid.
cplx simpson(std::span<const cplx> g, double h);

/// Running integral int_0^{x_j} g. Even nodes are composite Simpson; odd nodes
/// add the integral of the Simpson parabola over the half panel.
std::vector<cplx> cumulative_simpson(std::span<const cplx> g, double h);

/// int_0^1 u conj(v).
cplx inner(const GridFunction& u, const GridFunction& v);
double l2_norm(const GridFunction& u);
double sup_norm(const GridFunction& u);

}  // namespace shrinkedge
