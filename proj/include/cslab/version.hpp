#pragma once

namespace cslab {

inline constexpr const char* kVersion = "0.1.0";

} // namespace cslab
