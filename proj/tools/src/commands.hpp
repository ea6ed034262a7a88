#pragma once

#include "common.hpp"

namespace sbflow_tools {

// Each command resolves its own defaults from the raw options, runs, writes
// its artifacts into the output directory and returns the process exit code
// (0 success, 1 failed checks or failed runs, 64 usage errors).
int cmd_validate(const RawOptions& raw);
int cmd_figure1(const RawOptions& raw);
int cmd_sweep(const RawOptions& raw);
int cmd_thm31(const RawOptions& raw);

}  // namespace sbflow_tools
