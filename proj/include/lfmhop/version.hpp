#pragma once

#include <string>

namespace lfmhop {

inline constexpr const char* kVersion = "0.1.0";

/// Per-module versions, embedded in output artifacts for reproducibility.
std::string version_json();

}  // namespace lfmhop
