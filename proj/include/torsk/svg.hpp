#pragma once

#include <string>

#include "torsk/types.hpp"

namespace torsk {

/// Self-contained SVG heatmap: one colored rect per cell, values mapped
/// min..max onto a dark-to-bright ramp. No plotting dependency.
void write_heatmap_svg(const Matrix& values, const std::string& path, int cell_px = 6);

}  // namespace torsk
