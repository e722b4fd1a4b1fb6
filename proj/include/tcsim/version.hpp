#pragma once

namespace tcsim {

inline constexpr const char* kVersion = "0.1.0";

}
