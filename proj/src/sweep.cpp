#include "shrinkedge/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <sstream>

#include "shrinkedge/error.hpp"

namespace shrinkedge {

std::vector<double> default_eps_grid() {
  std::vector<double> g;
  for (int i = 0; i < 9; ++i) g.push_back(std::pow(10.0, -2.0 - 0.5 * i));
  return g;
}

void validate_eps_grid(std::span<const double> eps) {
  if (eps.empty()) throw Error(ErrorCode::InvalidInput, "eps grid is empty");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0 && eps[i] <= 0.2))
      throw Error(ErrorCode::InvalidInput, "eps grid values must lie in (0, 0.2]");
    if (i > 0 && !(eps[i] < eps[i - 1])) throw Error(ErrorCode::InvalidInput, "eps grid must be strictly decreasing");
  }
}

namespace {

std::vector<SweepRow> sweep_one(const VertexCondition& vc, double eps) {
  std::vector<SweepRow> rows;
  for (const auto& p : find_negative_eigenvalues(vc, eps)) rows.push_back({p, secular_neg(vc, eps, p.kappa)});
  return rows;
}

}  // namespace

SweepTable sweep_serial(const VertexCondition& vc, std::span<const double> eps) {
  validate_eps_grid(eps);
  SweepTable t;
  for (double e : eps) t.push_back(sweep_one(vc, e));
  return t;
}

SweepTable sweep_parallel(const VertexCondition& vc, std::span<const double> eps) {
  validate_eps_grid(eps);
  const auto n = static_cast<std::ptrdiff_t>(eps.size());
  SweepTable t(eps.size());
  std::vector<std::exception_ptr> errors(eps.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      t[i] = sweep_one(vc, eps[i]);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return t;
}

std::string sweep_csv(const SweepTable& table) {
  std::ostringstream os;
  os << "epsilon,kappa,lambda,kind,alpha_pred,secular_residual\n";
  char buf[64];
  const auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  for (const auto& group : table)
    for (const auto& r : group) {
      const auto& p = r.point;
      os << num(p.epsilon) << ',' << num(p.kappa) << ',' << num(p.lambda) << ','
         << (p.kind ? to_string(*p.kind) : "") << ',' << (p.alpha_predicted ? num(*p.alpha_predicted) : "") << ','
         << num(r.secular_residual) << '\n';
    }
  return os.str();
}

std::vector<BranchFit> fit_branches(const SweepTable& table, double tol) {
  std::map<Kind, std::vector<SpectralPoint>> branches;
  for (const auto& group : table)
    for (const auto& r : group)
      if (r.point.kind) branches[*r.point.kind].push_back(r.point);

  std::vector<BranchFit> out;
  for (const auto& [kind, pts] : branches) {
    BranchFit bf{kind, fit_rate(pts), pts.front().alpha_predicted};
    bf.slope_error = std::abs(bf.fit.slope - predicted_slope(kind));
    if (bf.alpha_predicted) bf.coeff_error = std::abs(bf.fit.coeff - *bf.alpha_predicted) / *bf.alpha_predicted;
    bf.agrees = bf.slope_error <= tol && bf.coeff_error <= tol && bf.fit.rounded_slope == predicted_slope(kind);
    out.push_back(bf);
  }
  return out;
}

}  // namespace shrinkedge
