#pragma once

namespace arnoldqc {

inline constexpr const char* version = "0.1.0";

} // namespace arnoldqc
