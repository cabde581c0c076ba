#include "shrinkedge/fd_oracle.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "shrinkedge/detail/overloaded.hpp"
#include "shrinkedge/error.hpp"

namespace shrinkedge {

namespace {

// Columns of a basis of ker P together with E^* T E.
struct VertexBasis {
  std::vector<std::array<cplx, 2>> cols;
  Mat2 t{};  // restricted coupling, only the leading dim x dim block used
  std::string text;
};

VertexBasis vertex_basis(const VertexCondition& vc) {
  return std::visit(
      detail::overloaded{
          [](const Rank2&) { return VertexBasis{{}, {}, "both traces eliminated"}; },
          [](const Rank1& r) {
            VertexBasis vb;
            if (r.z_infinite()) {
              vb.cols = {{cplx{1.0}, cplx{0.0}}};
              vb.t[0][0] = r.mu;
              vb.text = "long-edge trace eliminated";
            } else {
              vb.cols = {{-*r.z, cplx{1.0}}};
              vb.t[0][0] = r.mu * (1.0 + r.z_abs2());
              vb.text = "combination u_s + z u_e eliminated";
            }
            return vb;
          },
          [](const Rank0& r) {
            VertexBasis vb;
            vb.cols = {{cplx{1.0}, cplx{0.0}}, {cplx{0.0}, cplx{1.0}}};
            vb.t = {{{cplx{r.a}, r.c}, {std::conj(r.c), cplx{r.b}}}};
            vb.text = "no trace eliminated";
            return vb;
          },
      },
      vc);
}

}  // namespace

DiscreteOperator assemble(const VertexCondition& vc, double epsilon, std::size_t n_s, std::size_t n_e) {
  if (n_s < 16 || n_e < 16) throw Error(ErrorCode::MeshTooCoarse, "meshes need at least 16 nodes per edge");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw Error(ErrorCode::InvalidInput, "epsilon must be positive");
  const double hs = epsilon / static_cast<double>(n_s - 1);
  const double he = 1.0 / static_cast<double>(n_e - 1);
  const VertexBasis vb = vertex_basis(vc);
  const std::size_t nv = vb.cols.size();

  DiscreteOperator op;
  op.n_s = n_s;
  op.n_e = n_e;
  op.vertex_dofs = nv;
  op.constraints = vb.text + "; u_e(0) = 0 eliminated";

  const std::size_t ns_free = n_s - 1;  // s_0 .. s_{n_s-2}
  const std::size_t ne_free = n_e - 2;  // e_{n_e-2} .. e_1
  const std::size_t N = ns_free + nv + ne_free;
  op.k_diag.assign(N, 0.0);
  op.m_diag.assign(N, 0.0);
  op.k_off.assign(N - 1, cplx{});
  op.m_off.assign(N - 1, cplx{});

  // Short edge: node 0 carries one element (Neumann end), the rest two.
  for (std::size_t i = 0; i < ns_free; ++i) {
    op.k_diag[i] = (i == 0 ? 1.0 : 2.0) / hs;
    op.m_diag[i] = (i == 0 ? 1.0 : 2.0) * hs / 3.0;
    if (i + 1 < ns_free) {
      op.k_off[i] = -1.0 / hs;
      op.m_off[i] = hs / 6.0;
    }
  }

  // Vertex unknowns: the trace of the short edge is sum_w E(0, w) x_w, of the long edge sum_w E(1, w) x_w.
  const std::size_t v0 = ns_free;
  for (std::size_t w = 0; w < nv; ++w) {
    const auto& E = vb.cols[w];
    op.k_diag[v0 + w] = std::norm(E[0]) / hs + std::norm(E[1]) / he + vb.t[w][w].real();
    op.m_diag[v0 + w] = (std::norm(E[0]) * hs + std::norm(E[1]) * he) / 3.0;
  }
  if (nv == 2) op.k_off[v0] = vb.t[0][1];  // mass is zero: the two traces sit on different edges

  if (nv > 0) {
    // Links to the neighbouring edge nodes; K(i, j) = a(phi_j, phi_i).
    const cplx Es = vb.cols.front()[0], Ee = vb.cols.back()[1];
    op.k_off[v0 - 1] = -Es / hs;
    op.m_off[v0 - 1] = Es * hs / 6.0;
    op.k_off[v0 + nv - 1] = -std::conj(Ee) / he;
    op.m_off[v0 + nv - 1] = std::conj(Ee) * he / 6.0;
  }

  const std::size_t e0i = v0 + nv;
  for (std::size_t j = 0; j < ne_free; ++j) {
    op.k_diag[e0i + j] = 2.0 / he;
    op.m_diag[e0i + j] = 2.0 * he / 3.0;
    if (j + 1 < ne_free) {
      op.k_off[e0i + j] = -1.0 / he;
      op.m_off[e0i + j] = he / 6.0;
    }
  }
  return op;
}

std::size_t count_below(const DiscreteOperator& op, double sigma) {
  // Sturm count of eigenvalues strictly below sigma; a vanishing pivot becomes
  // +pivmin, so an exact eigenvalue at sigma is not counted.
  double scale = 0.0;
  for (std::size_t i = 0; i < op.size(); ++i) scale = std::max(scale, std::abs(op.k_diag[i] - sigma * op.m_diag[i]));
  const double pivmin = std::max(scale, 1.0) * 1e-300;
  std::size_t neg = 0;
  double d = 1.0;
  for (std::size_t i = 0; i < op.size(); ++i) {
    double a = op.k_diag[i] - sigma * op.m_diag[i];
    if (i > 0) a -= std::norm(op.k_off[i - 1] - sigma * op.m_off[i - 1]) / d;
    if (!std::isfinite(a)) {
      std::ostringstream os;
      os << "non-finite pivot at row " << i << " for shift " << sigma;
      throw Error(ErrorCode::FactorizationBreakdown, os.str());
    }
    if (std::abs(a) < pivmin) a = pivmin;
    if (a < 0.0) ++neg;
    d = a;
  }
  return neg;
}

namespace {

std::size_t safe_count(const DiscreteOperator& op, double sigma) {
  for (int attempt = 0;; ++attempt) {
    try {
      return count_below(op, sigma);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::FactorizationBreakdown || attempt == 8) throw;
      sigma += (std::abs(sigma) + 1.0) * 1e-13 * std::ldexp(1.0, attempt);
    }
  }
}

}  // namespace

std::size_t negative_inertia(const DiscreteOperator& op) { return safe_count(op, 0.0); }

std::vector<double> lowest_eigenvalues(const DiscreteOperator& op, std::size_t count) {
  if (count > 6) throw Error(ErrorCode::InvalidInput, "at most 6 eigenvalues can be requested");
  if (count > op.size()) throw Error(ErrorCode::InvalidInput, "more eigenvalues requested than unknowns");
  double lo = -1.0;
  while (safe_count(op, lo) > 0) lo *= 2.0;
  double hi = 1.0;
  while (safe_count(op, hi) < count) hi *= 2.0;

  std::vector<double> out;
  for (std::size_t i = 1; i <= count; ++i) {
    // Smallest sigma with count_below(sigma) >= i.
    double a = lo, b = hi;
    while (b - a > 1e-10 * std::max(std::abs(a), std::abs(b)) + 1e-14) {
      const double m = 0.5 * (a + b);
      if (m <= a || m >= b) break;
      if (safe_count(op, m) >= i) b = m;
      else a = m;
    }
    out.push_back(0.5 * (a + b));
    lo = a;
  }
  return out;
}

double convergence_order(const VertexCondition& vc, double epsilon,
                         std::span<const std::pair<std::size_t, std::size_t>> ladder,
                         std::optional<double> reference) {
  if (ladder.size() < 3) throw Error(ErrorCode::InvalidInput, "convergence_order needs at least 3 meshes");
  std::vector<double> h, lam;
  for (const auto& [ns, ne] : ladder) {
    lam.push_back(lowest_eigenvalues(assemble(vc, epsilon, ns, ne), 1)[0]);
    h.push_back(1.0 / static_cast<double>(ne - 1));
  }
  std::vector<double> x, y;
  if (reference) {
    for (std::size_t i = 0; i < lam.size(); ++i) {
      x.push_back(std::log(h[i]));
      y.push_back(std::log(std::abs(lam[i] - *reference)));
    }
  } else {
    for (std::size_t i = 0; i + 1 < lam.size(); ++i) {
      x.push_back(std::log(h[i]));
      y.push_back(std::log(std::abs(lam[i] - lam[i + 1])));
    }
  }
  if (x.size() < 2) throw Error(ErrorCode::InvalidInput, "not enough meshes for a slope");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) sxy += (x[i] - mx) * (y[i] - my), sxx += (x[i] - mx) * (x[i] - mx);
  return sxy / sxx;
}

}  // namespace shrinkedge
