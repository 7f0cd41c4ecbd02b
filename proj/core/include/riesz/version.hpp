#pragma once

namespace riesz {

inline constexpr const char* kToolName = "riesz";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace riesz
