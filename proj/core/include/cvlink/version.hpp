#pragma once

namespace cvlink {

inline constexpr const char* kToolName = "cvlink";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace cvlink
