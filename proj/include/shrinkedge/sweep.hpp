#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shrinkedge/secular.hpp"
#include "shrinkedge/vertex_model.hpp"

namespace shrinkedge {

/// Log-spaced eps grid from 1e-2 down to 1e-6, 9 points.
std::vector<double> default_eps_grid();

/// Strictly decreasing, every value in (0, 0.2]. Throws InvalidInput otherwise.
void validate_eps_grid(std::span<const double> eps);

struct SweepRow {
  SpectralPoint point;
  double secular_residual = 0.0;
};

/// Rows grouped per eps in grid order; each group ascending in kappa.
using SweepTable = std::vector<std::vector<SweepRow>>;

/// Reference implementation, one eps at a time.
SweepTable sweep_serial(const VertexCondition& vc, std::span<const double> eps);

/// Same result as sweep_serial with the eps points distributed over OpenMP
/// threads. The first exception in grid order is rethrown.
SweepTable sweep_parallel(const VertexCondition& vc, std::span<const double> eps);

/// CSV with header epsilon,kappa,lambda,kind,alpha_pred,secular_residual; 17 significant digits.
std::string sweep_csv(const SweepTable& table);

struct BranchFit {
  Kind kind;
  RateFit fit;
  std::optional<double> alpha_predicted;
  double slope_error = 0.0;  // |slope - predicted slope|
  double coeff_error = 0.0;  // |coeff - alpha| / alpha, 0 without a prediction
  bool agrees = false;
};

/// Groups rows by kind and fits each branch; `tol` bounds both errors.
std::vector<BranchFit> fit_branches(const SweepTable& table, double tol);

}  // namespace shrinkedge
