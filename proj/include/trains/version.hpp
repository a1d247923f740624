#pragma once

namespace trains {

inline constexpr const char* kToolVersion = "1.0.0";

}  // namespace trains
