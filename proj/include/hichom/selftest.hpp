#pragma once

#include <string>
#include <vector>

namespace hichom {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string details;   // deterministic (no timings)
  double seconds = 0.0;  // wall time, reported on stdout only
};

struct SelftestReport {
  std::vector<CriterionResult> criteria;
  bool all_pass = false;
  std::string report_json;  // deterministic rendering (excludes timings)
};

// Runs the acceptance suite. The whole payload executes twice; the final
// criterion compares the two rendered reports byte for byte.
SelftestReport run_selftest(int threads = 1);

}  // namespace hichom
