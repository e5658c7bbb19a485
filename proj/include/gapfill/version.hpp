#pragma once

namespace gapfill {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kGeneratorVersion = "1";

}  // namespace gapfill
