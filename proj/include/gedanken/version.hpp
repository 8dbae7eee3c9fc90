#pragma once

namespace gedanken {

inline constexpr const char* kToolName = "gedanken";
inline constexpr const char* kToolVersion = "1.0.0";

}  // namespace gedanken
