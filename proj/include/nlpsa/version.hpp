#pragma once

namespace nlpsa {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace nlpsa
