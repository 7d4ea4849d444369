#pragma once

namespace mplsrisk {

inline constexpr const char* kToolName = "mplsrisk";
inline constexpr const char* kToolVersion = "0.1.0";

// Scenario file format version accepted by the loader.
inline constexpr int kScenarioFormatVersion = 1;

}  // namespace mplsrisk
