#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace shrinkedge {

/// One acceptance check. `run` fills a short detail line and returns pass/fail;
/// a thrown exception counts as a failure.
struct Criterion {
  int id = 0;
  std::string name;
  double time_budget_s = 0.0;
  std::function<bool(std::string& detail)> run;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

std::vector<Criterion> acceptance_criteria();

/// Runs every criterion in order. A criterion that passes its check but exceeds
/// its time budget fails.
std::vector<CriterionResult> run_criteria(const std::vector<Criterion>& criteria);

/// Prints one line per criterion and a summary; returns 0 if all passed, else 1.
int report(const std::vector<CriterionResult>& results, std::ostream& out);

}  // namespace shrinkedge
