#pragma once

#include <string>
#include <vector>

#include "cgclosure/body.hpp"
#include "cgclosure/cuts.hpp"

namespace cgc {

/// SVG of a planar body, its cut lines and the shaded closure. Screen
/// coordinates use six decimals; exact values go to data-* attributes.
/// Throws NotPlottable unless the ambient dimension is 2.
std::string plot2d(const ConvexBody& body, const std::vector<CGCut>& cuts, const Polytope& closure);

}  // namespace cgc
