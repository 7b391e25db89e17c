#pragma once

namespace loandet {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace loandet
