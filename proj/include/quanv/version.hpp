#pragma once

namespace quanv {

inline constexpr const char* version_string = "quanv 0.1.0";

} // namespace quanv
