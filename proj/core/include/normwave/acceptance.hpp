#pragma once

// Desk-scale acceptance suite: twelve numbered checks tying the solvers to
// closed forms, bounds and conservation laws. Each check reports the measured
// quantities next to its tolerance so failures are diagnosable from the line.

#include <functional>
#include <string>
#include <vector>

namespace normwave {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  std::vector<int> only;  // empty runs all twelve
  std::function<void(const CriterionResult&)> on_result;
};

/// Runs the selected criteria in order. Results of criteria 5 and 6 are
/// shared with 7 and 9-12; a criterion whose prerequisite threw is failed with
/// the exception text.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts = {});

/// "[PASS] 05 title :: detail".
std::string format_result(const CriterionResult& r);

}  // namespace normwave
