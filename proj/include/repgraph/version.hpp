#pragma once

namespace repgraph {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace repgraph
