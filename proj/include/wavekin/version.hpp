#pragma once

namespace wavekin {

inline constexpr const char* kToolName = "wavekin";
inline constexpr const char* kToolVersion = "1.0.0";

} // namespace wavekin
