#pragma once

namespace symsq {

inline constexpr const char *kVersion = "0.1.0";

} // namespace symsq
