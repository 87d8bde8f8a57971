#pragma once

namespace oscbath {

inline constexpr const char* version = "0.1.0";

} // namespace oscbath
