#pragma once

#include <string>
#include <vector>

#include "specdim/mds.hpp"

namespace specdim::tools {

struct ScatterPoint {
  std::string label;
  Point2 position;
};

// Static SVG scatter, one color per label, with a legend.
std::string render_scatter_svg(const std::vector<ScatterPoint>& points, const std::string& title);

}  // namespace specdim::tools
