#include "sbflow/version.hpp"

#ifndef SBFLOW_VERSION
#define SBFLOW_VERSION "0.0.0"
#endif
#ifndef SBFLOW_GIT_DESCRIBE
#define SBFLOW_GIT_DESCRIBE "unknown"
#endif

namespace sbflow {

const char* version() { return SBFLOW_VERSION; }

const char* git_describe() { return SBFLOW_GIT_DESCRIBE; }

}  // namespace sbflow
