#pragma once

namespace seqsel {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace seqsel
