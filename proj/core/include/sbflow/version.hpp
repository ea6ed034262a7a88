#pragma once

namespace sbflow {

// Library semantic version (CMake project version).
const char* version();

// `git describe` of the build tree at configure time, or "unknown".
const char* git_describe();

}  // namespace sbflow
