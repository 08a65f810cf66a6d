#pragma once

#include "run_config.hpp"

namespace mdrlab::cli {

// Each returns the process exit code; ConfigError and IoError propagate.
int cmd_regions(const RunConfig& config);
int cmd_fig3a(const RunConfig& config);
int cmd_fig3b(const RunConfig& config);
int cmd_bounds_table(const RunConfig& config);
int cmd_verify(const RunConfig& config);
int cmd_max_search(const RunConfig& config);

}  // namespace mdrlab::cli
