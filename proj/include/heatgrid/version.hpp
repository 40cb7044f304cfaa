#pragma once

namespace heatgrid {

inline constexpr char kVersion[] = "0.1.0";

}  // namespace heatgrid
