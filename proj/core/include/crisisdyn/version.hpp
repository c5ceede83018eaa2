#pragma once

namespace crisisdyn {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace crisisdyn
