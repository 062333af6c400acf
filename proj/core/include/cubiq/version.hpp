#pragma once

namespace cubiq {
inline constexpr const char* kVersion = "0.1.0";
}
