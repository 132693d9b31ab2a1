#pragma once

namespace nafas {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace nafas
