#pragma once

namespace catspec {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace catspec
