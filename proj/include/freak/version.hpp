#pragma once

namespace freak {
inline constexpr const char* kVersion = "1.0.0";
}
