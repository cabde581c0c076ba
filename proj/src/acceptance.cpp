#include "shrinkedge/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>

#include "shrinkedge/counting.hpp"
#include "shrinkedge/eigenmodes.hpp"
#include "shrinkedge/error.hpp"
#include "shrinkedge/fd_oracle.hpp"
#include "shrinkedge/resolvent.hpp"
#include "shrinkedge/secular.hpp"
#include "shrinkedge/sweep.hpp"

namespace shrinkedge {

namespace {

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const BranchFit* branch(const std::vector<BranchFit>& fits, Kind k) {
  for (const auto& f : fits)
    if (f.kind == k) return &f;
  return nullptr;
}

GridFunction smooth_random(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g;
  std::array<cplx, 4> a{}, b{};
  for (int m = 0; m < 4; ++m) {
    a[m] = cplx{g(rng), g(rng)} / double(m + 1);
    b[m] = cplx{g(rng), g(rng)} / double(m + 1);
  }
  return GridFunction::sample(
      [&](double t) {
        cplx v{};
        for (int m = 0; m < 4; ++m)
          v += a[m] * std::cos(m * std::numbers::pi * t) + b[m] * std::sin((m + 1) * std::numbers::pi * t);
        return v;
      },
      n);
}

bool preview_example(std::string& d) {
  const VertexCondition vc = Rank0{0.0, 0.0, -1.0};
  const auto eps = default_eps_grid();
  const auto table = sweep_parallel(vc, eps);
  const auto fits = fit_branches(table, 0.02);
  const auto* c = branch(fits, Kind::C);
  if (!c) return d = "no type-C branch", false;
  const double last = table.back().at(0).point.lambda * std::pow(eps.back(), 2.0 / 3.0);
  d = fmt("slope %.5f (want -2/3 +- 0.02), lambda*eps^(2/3) at 1e-6 = %.6f", c->fit.slope, last);
  return std::abs(c->fit.slope + 2.0 / 3.0) <= 0.02 && std::abs(last + 1.0) <= 0.05;
}

bool type_s_rate(std::string& d) {
  const auto table = sweep_parallel(Rank1{std::nullopt, -1.0}, default_eps_grid());
  const auto fits = fit_branches(table, 0.02);
  const auto* s = branch(fits, Kind::S);
  if (!s) return d = "no type-S branch", false;
  d = fmt("slope %.5f, coeff %.5f", s->fit.slope, s->fit.coeff);
  return std::abs(s->fit.slope + 1.0) <= 0.02 && std::abs(s->fit.coeff - 1.0) <= 0.02;
}

bool type_b_stability(std::string& d) {
  const VertexCondition vc = Rank1{cplx{-1.0}, -2.0};
  const double k1 = solve_kappa1(cplx{-1.0}, -2.0);
  const auto table = sweep_parallel(vc, default_eps_grid());
  const auto fits = fit_branches(table, 0.02);
  const auto* b = branch(fits, Kind::B);
  if (!b) return d = "no type-B branch", false;
  double worst = 0.0;
  for (const auto& g : table) {
    const auto& p = g.at(0).point;
    worst = std::max(worst, std::abs(p.lambda + k1 * k1) / p.epsilon);
  }
  d = fmt("slope %.5f, max |lambda + kappa1^2| / eps = %.3f (bound 5)", b->fit.slope, worst);
  return std::abs(b->fit.slope) <= 0.02 && worst <= 5.0;
}

bool coexistence(std::string& d) {
  const Rank0 r{-1.0, -3.0, 0.0};
  const VertexCondition vc = r;
  const auto eps = default_eps_grid();
  const auto table = sweep_parallel(vc, eps);
  for (std::size_t i = 0; i < table.size(); ++i)
    if (table[i].size() != 2) return d = fmt("%zu roots at eps=%g", table[i].size(), eps[i]), false;
  const auto fits = fit_branches(table, 0.02);
  const auto *b = branch(fits, Kind::B), *s = branch(fits, Kind::S);
  if (!b || !s) return d = "missing branch", false;
  int counted = 2;
  for (double e : eps) counted = std::min(counted, count_negative(r, e).count);
  const auto inertia = negative_inertia(assemble(vc, 1e-2, 2000, 2000));
  d = fmt("slopes B %.4f, S %.4f; counting %d; FEM inertia %zu", b->fit.slope, s->fit.slope, counted, inertia);
  return b->slope_error <= 0.02 && s->slope_error <= 0.02 && counted == 2 && inertia == 2;
}

bool localization_check(std::string& d) {
  struct Case {
    VertexCondition vc;
    double eps;
  };
  const Case c{Rank0{0.0, 0.0, -1.0}, 1e-5}, s{Rank0{-1.0, 1.0, cplx{0.5}}, 1e-4}, b{Rank1{cplx{-1.0}, -2.0}, 1e-3};
  double quad_err = 0.0;
  std::array<LocalizationReport, 3> loc{};
  int i = 0;
  for (const auto& cs : {c, s, b}) {
    const auto p = find_negative_eigenvalues(cs.vc, cs.eps).back();
    loc[i++] = localization(cs.vc, p);
    const std::size_t n = 2 * static_cast<std::size_t>(64 * std::ceil(p.kappa)) + 1;
    const auto q = quadrature_norms(build_eigenmode(cs.vc, p, std::max<std::size_t>(n, 1025)));
    quad_err = std::max({quad_err, std::abs(q.norm_s_sq - loc[i - 1].norm_s_sq),
                         std::abs(q.norm_e_sq - loc[i - 1].norm_e_sq)});
  }
  d = fmt("C: s=%.4f e=%.4f; S: s=%.6f; B: e=%.6f; quadrature gap %.2e", loc[0].norm_s_sq, loc[0].norm_e_sq,
          loc[1].norm_s_sq, loc[2].norm_e_sq, quad_err);
  return std::abs(loc[0].norm_s_sq - 2.0 / 3.0) <= 0.05 && std::abs(loc[0].norm_e_sq - 1.0 / 3.0) <= 0.05 &&
         loc[1].norm_s_sq >= 0.95 && loc[2].norm_e_sq >= 0.99 && quad_err <= 1e-8;
}

const std::vector<VertexCondition>& five_branches() {
  static const std::vector<VertexCondition> v{Rank2{}, Rank1{cplx{0.4, -1.2}, -0.7}, Rank1{std::nullopt, 0.8},
                                              Rank0{0.6, -1.5, cplx{0.3, 0.9}}, Rank0{0.0, 2.0, 0.0}};
  return v;
}

bool resolvent_residual(std::string& d) {
  std::mt19937_64 rng(20240601);
  const std::size_t n = 513;
  double worst_res = 0.0, worst_sym = 0.0;
  for (const auto& vc : five_branches())
    for (cplx lam : {cplx{0.0, 1.0}, cplx{2.0, 3.0}})
      for (double eps : {1e-2, 1e-4}) {
        const Forcing f{smooth_random(rng, n), smooth_random(rng, n)};
        const Forcing g{smooth_random(rng, n), smooth_random(rng, n)};
        const auto sf = resolve(vc, eps, lam, f);
        worst_res = std::max(worst_res, residual(vc, eps, lam, f, sf));
        const auto sg = resolve(vc, eps, std::conj(lam), g);
        const cplx lhs = weighted_inner(eps, sf.u_s, sf.u_e, g.s, g.e);
        const cplx rhs = weighted_inner(eps, f.s, f.e, sg.u_s, sg.u_e);
        worst_sym = std::max(worst_sym, std::abs(lhs - rhs) / std::abs(lhs));
      }
  d = fmt("max residual %.2e (bound 1e-7), max symmetry gap %.2e (bound 1e-8)", worst_res, worst_sym);
  return worst_res <= 1e-7 && worst_sym <= 1e-8;
}

bool leading_orders(std::string& d) {
  std::mt19937_64 rng(77);
  const std::size_t n = 257;
  const cplx lam{0.0, 1.0};
  const auto fs = smooth_random(rng, n), fe = smooth_random(rng, n), z = GridFunction::zeros(n);
  const std::vector<double> eps{1e-2, 5e-3, 2.5e-3, 1.25e-3, 6.25e-4};

  const auto q = leading_order_probe(Rank2{}, lam, {fs, z}, eps);
  const auto qb = leading_order_probe(Rank2{}, lam, {z, fe}, eps);
  const auto res = leading_order_probe(Rank0{0.0, 0.0, 0.0}, lam, {fs, z}, eps);
  const auto res0 = leading_order_probe(Rank0{0.0, 0.0, 0.0}, lam, {z, fe}, eps);
  const auto lead = leading_order_probe(Rank1{cplx{-1.0}, 0.0}, lam, {z, fe}, eps);

  d = fmt("rank2 R_s order %.3f, B f_e gap %.1e; resonant limit %.3e (f_e only: %.1e); lead-driven limit %.3e order %.3f",
          q.rs_order, qb.lead_functional_error.value_or(INFINITY), res.rs_limit_norm, res0.rs_limit_norm,
          lead.rs_limit_norm, lead.rs_order);
  return std::abs(q.rs_order - 2.0) <= 0.2 && qb.lead_functional_error.value_or(INFINITY) <= 1e-6 &&
         res.rs_limit_norm > 1e-3 && res0.rs_limit_norm <= 1e-12 * res.rs_limit_norm && lead.rs_limit_norm > 1e-3 &&
         std::abs(lead.rs_order - 1.0) <= 0.2;
}

bool oracle_agreement(std::string& d) {
  const std::vector<VertexCondition> rows{
      Rank1{std::nullopt, -1.0},  // z = inf, mu < 0
      Rank1{cplx{-1.0}, -2.0},    // z finite, mu(1+|z|^2) < -1
      Rank0{-1.0, -3.0, 0.0},     // a < 0, |c|^2 < a(b+1)
      Rank0{-1.0, 1.0, 0.5},      // a < 0, |c|^2 >= a(b+1)
      Rank0{0.0, -3.0, 0.0},      // a = 0, c = 0, b+1 < 0
      Rank0{0.0, 0.0, -1.0},      // a = 0, c != 0
      Rank0{1.0, 0.0, 2.0},       // a > 0, |c|^2 > a(b+1)
  };
  const double eps = 1e-2;
  double worst = 0.0;
  int count_failures = 0;
  for (const auto& vc : rows) {
    auto roots = find_negative_eigenvalues(vc, eps);
    std::sort(roots.begin(), roots.end(), [](const auto& x, const auto& y) { return x.lambda < y.lambda; });
    const auto op = assemble(vc, eps, 2000, 2000);
    if (static_cast<int>(negative_inertia(op)) != expected_negative_count(vc)) ++count_failures;
    const auto ev = lowest_eigenvalues(op, roots.size());
    for (std::size_t i = 0; i < roots.size(); ++i)
      worst = std::max(worst, std::abs(ev[i] - roots[i].lambda) / std::abs(roots[i].lambda));
  }
  d = fmt("%zu table rows, max relative gap %.2e (bound 5e-3), count mismatches %d", rows.size(), worst,
          count_failures);
  return worst <= 5e-3 && count_failures == 0;
}

bool property_suites(std::string& d) {
  std::mt19937_64 rng(9001);
  std::uniform_real_distribution<double> u(-5, 5), m(0, 3), ph(0, 2 * std::numbers::pi), le(-6, 0);
  std::uniform_int_distribution<int> pick(0, 4);

  int triple_fail = 0;
  for (int t = 0; t < 500; ++t) {
    // Mix in the special rows a = 0 and c = 0.
    const int kind = pick(rng);
    Rank0 r{kind == 1 ? 0.0 : u(rng), u(rng), kind == 2 ? cplx{} : std::polar(m(rng), ph(rng))};
    if (kind == 3) r.a = 0.0, r.c = 0.0;
    const int n_cls = static_cast<int>(classify(r).size());
    const int n_cnt = count_negative(r, 1e-3).count;
    const int n_roots = static_cast<int>(find_negative_eigenvalues(r, 1e-3).size());
    if (n_cls != n_cnt || n_cnt != n_roots) ++triple_fail;
  }

  int interlace_fail = 0;
  std::normal_distribution<double> g;
  for (int t = 0; t < 500; ++t) {
    Mat3 h{};
    for (int i = 0; i < 3; ++i) {
      h[i][i] = 3 * g(rng);
      for (int j = i + 1; j < 3; ++j) h[j][i] = std::conj(h[i][j] = cplx{3 * g(rng), 3 * g(rng)});
    }
    const double eps = std::pow(10.0, le(rng));
    Mat3 he = h;
    const auto e0 = build_E0();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) he[i][j] -= e0(i, j) / eps;
    const auto li = hermitian3_eigs(Hermitian3(h)), lp = hermitian3_eigs(Hermitian3(he));
    const double tol = 1e-9 * (1.0 / eps + 10.0);
    for (int i = 0; i < 2; ++i)
      if (!(li[i] <= lp[i + 1] + tol && lp[i + 1] <= li[i + 1] + tol)) ++interlace_fail;
  }

  double worst_b = 0.0;
  for (double b : {-2.0, 1.0, 3.0}) {
    const Rank0 r{0.0, b, -1.0};
    auto D = [&](double nu) { return (find_negative_eigenvalues(r, nu * nu * nu).at(0).kappa * nu - 1.0) / nu; };
    const double nu = 2e-3;
    const double beta = 2.0 * D(nu / 2) - D(nu);
    worst_b = std::max(worst_b, std::abs(beta + b / 3.0) / std::abs(b / 3.0));
  }
  d = fmt("triple disagreements %d/500, interlacing violations %d/500, worst -b/3 relative error %.2e", triple_fail,
          interlace_fail, worst_b);
  return triple_fail == 0 && interlace_fail == 0 && worst_b <= 0.1;
}

}  // namespace

std::vector<Criterion> acceptance_criteria() {
  return {
      {1, "preview example rate eps^(-2/3)", 1.0, preview_example},
      {2, "type S rate and coefficient", 1.0, type_s_rate},
      {3, "type B stability", 1.0, type_b_stability},
      {4, "two-eigenvalue coexistence", 5.0, coexistence},
      {5, "localization", 1.0, localization_check},
      {6, "resolvent residual and symmetry", 2.0, resolvent_residual},
      {7, "resolvent leading orders", 3.0, leading_orders},
      {8, "FEM oracle agreement", 30.0, oracle_agreement},
      {9, "property suites", 20.0, property_suites},
  };
}

std::vector<CriterionResult> run_criteria(const std::vector<Criterion>& criteria) {
  std::vector<CriterionResult> out;
  for (const auto& c : criteria) {
    CriterionResult r{c.id, c.name, false, {}, 0.0};
    const auto t0 = std::chrono::steady_clock::now();
    try {
      r.passed = c.run(r.detail);
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (r.passed && c.time_budget_s > 0.0 && r.seconds > c.time_budget_s) {
      r.passed = false;
      r.detail += fmt(" [over time budget %.1f s]", c.time_budget_s);
    }
    out.push_back(std::move(r));
  }
  return out;
}

int report(const std::vector<CriterionResult>& results, std::ostream& out) {
  int failed = 0;
  for (const auto& r : results) {
    out << (r.passed ? "PASS" : "FAIL") << "  " << r.id << ". " << r.name << "  (" << fmt("%.2f", r.seconds)
        << " s)  " << r.detail << '\n';
    failed += !r.passed;
  }
  out << results.size() - failed << "/" << results.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}

}  // namespace shrinkedge
