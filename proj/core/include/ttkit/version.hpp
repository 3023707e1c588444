#pragma once

namespace ttkit {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ttkit
