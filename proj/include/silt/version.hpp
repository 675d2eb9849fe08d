#pragma once

namespace silt {

inline constexpr const char* version = "1.0.0";

}  // namespace silt
