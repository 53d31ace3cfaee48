#pragma once

namespace fermicycle {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fermicycle
