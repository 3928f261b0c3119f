#pragma once

namespace wls {

inline constexpr const char* version = "0.1.0";

}  // namespace wls
