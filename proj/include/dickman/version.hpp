#pragma once

namespace dickman {

inline constexpr const char* kVersion = "0.1.0";

}
