#pragma once

namespace broadbid {

inline constexpr const char* kVersion = "0.3.0";

}  // namespace broadbid
