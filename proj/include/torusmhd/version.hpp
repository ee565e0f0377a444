#pragma once

namespace torusmhd {
inline constexpr const char* kVersion = "0.1.0";
}
