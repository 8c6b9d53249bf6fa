#pragma once

namespace pasrec {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace pasrec
