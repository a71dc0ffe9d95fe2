#pragma once

#include <string>

#include "hichom/config.hpp"

namespace hichom {

struct RunOptions {
  std::string out_override;  // overrides config output.directory when nonempty
  int threads = 1;
};

// Executes one command, writing its artifacts into the output directory.
// Returns the process exit code (0 success, 3 selftest failure); validation
// and solver failures are thrown as Error.
int run_command(const RunConfig& config, const RunOptions& options);

}  // namespace hichom
