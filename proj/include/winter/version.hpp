#pragma once

#include <string_view>

namespace winter {

inline constexpr std::string_view kVersion = "1.0.0";

}  // namespace winter
