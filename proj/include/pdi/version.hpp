#pragma once

namespace pdi {

inline constexpr const char* tool_name = "pdi";
inline constexpr const char* tool_version = "1.0.0";

} // namespace pdi
