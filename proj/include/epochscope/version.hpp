#pragma once

namespace epochscope {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr int kCacheVersion = 1;

}  // namespace epochscope
