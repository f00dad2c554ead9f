#pragma once

namespace hitchin {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace hitchin
