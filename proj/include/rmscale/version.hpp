#pragma once

namespace rmscale {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace rmscale
