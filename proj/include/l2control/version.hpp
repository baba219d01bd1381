#pragma once

namespace l2control {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace l2control
