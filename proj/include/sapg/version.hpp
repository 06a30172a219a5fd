#pragma once

namespace sapg {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace sapg
