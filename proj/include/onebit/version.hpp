#pragma once

namespace onebit {
inline constexpr const char* kVersion = "0.1.0";
} // namespace onebit
