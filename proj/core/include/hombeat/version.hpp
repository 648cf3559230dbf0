#pragma once

namespace hombeat {

inline constexpr const char* version = "0.1.0";

}  // namespace hombeat
