#pragma once

namespace bellbound {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace bellbound
