#pragma once

namespace nsf {

inline constexpr const char* kVersion = "0.1.0";

// Stable across runs of one build; identical configs on one build therefore
// produce identical manifest build fields.
inline constexpr const char* kBuildId = "nsf 0.1.0 (" __DATE__ " " __TIME__ ")";

} // namespace nsf
