#pragma once

#include <string>
#include <vector>

namespace slitflow {

struct CheckResult {
  std::string id;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs the verification suite. `filter` keeps the checks whose id contains
/// it as a substring ("" runs everything). Each check pins its tolerances in
/// code and reports the measured values alongside them.
std::vector<CheckResult> run_acceptance(const std::string& filter = "");

/// One "[PASS]/[FAIL] id  detail  (x.xs)" line per check.
std::string format_results(const std::vector<CheckResult>& results);

}  // namespace slitflow
