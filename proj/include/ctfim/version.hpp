#pragma once

namespace ctfim {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ctfim
