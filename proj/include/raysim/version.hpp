#pragma once

namespace raysim {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace raysim
