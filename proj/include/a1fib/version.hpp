#pragma once

namespace a1fib {

inline constexpr const char* version = "0.1.0";

} // namespace a1fib
