#pragma once

namespace mocondg {

inline constexpr const char* kVersion = "0.3.0";

}  // namespace mocondg
