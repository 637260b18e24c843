#pragma once

namespace qosc {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace qosc
