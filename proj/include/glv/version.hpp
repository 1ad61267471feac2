#pragma once

namespace glv {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace glv
