#pragma once

namespace bilinop {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace bilinop
