#pragma once

namespace nodedens {
inline constexpr const char* kVersion = "0.1.0";
}
