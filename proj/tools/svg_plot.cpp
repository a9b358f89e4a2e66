#include "svg_plot.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <map>

namespace specdim::tools {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 540.0;
constexpr double kMargin = 48.0;
constexpr double kLegendWidth = 180.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fmt(const char* pattern, double a, double b) {
  char buf[96];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

}  // namespace

std::string render_scatter_svg(const std::vector<ScatterPoint>& points, const std::string& title) {
  double min_x = std::numeric_limits<double>::infinity(), max_x = -min_x;
  double min_y = min_x, max_y = -min_x;
  for (const auto& p : points) {
    min_x = std::min(min_x, p.position[0]);
    max_x = std::max(max_x, p.position[0]);
    min_y = std::min(min_y, p.position[1]);
    max_y = std::max(max_y, p.position[1]);
  }
  if (points.empty()) min_x = max_x = min_y = max_y = 0.0;
  // Equal scale on both axes so distances read correctly.
  const double span = std::max({max_x - min_x, max_y - min_y, 1e-12});
  const double plot_w = kWidth - kLegendWidth - 2 * kMargin;
  const double plot_h = kHeight - 2 * kMargin;
  const double scale = std::min(plot_w, plot_h) / span;
  const double cx = 0.5 * (min_x + max_x);
  const double cy = 0.5 * (min_y + max_y);
  const double ox = kMargin + 0.5 * plot_w;
  const double oy = kMargin + 0.5 * plot_h;

  std::map<std::string, std::string> colors;  // label order = first appearance
  std::vector<std::string> order;
  for (const auto& p : points) {
    if (colors.count(p.label)) continue;
    colors[p.label] = kPalette[order.size() % std::size(kPalette)];
    order.push_back(p.label);
  }

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"540\" viewBox=\"0 0 720 540\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"24\" y=\"28\" font-family=\"sans-serif\" font-size=\"16\">" + escape_xml(title) + "</text>\n";
  svg += "<rect x=\"" + fmt("%.1f\" y=\"%.1f", kMargin, kMargin) + "\" width=\"" + fmt("%.1f\" height=\"%.1f", plot_w, plot_h) +
         "\" fill=\"none\" stroke=\"#cccccc\"/>\n";
  for (const auto& p : points) {
    const double x = ox + (p.position[0] - cx) * scale;
    const double y = oy - (p.position[1] - cy) * scale;  // SVG y grows downward
    svg += "<circle " + fmt("cx=\"%.2f\" cy=\"%.2f\"", x, y) + " r=\"5\" fill=\"" + colors[p.label] +
           "\" stroke=\"black\" stroke-width=\"0.5\"><title>" + escape_xml(p.label) + "</title></circle>\n";
  }
  const double lx = kWidth - kLegendWidth;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const double ly = kMargin + 12.0 + 22.0 * static_cast<double>(i);
    svg += "<circle " + fmt("cx=\"%.1f\" cy=\"%.1f\"", lx, ly) + " r=\"6\" fill=\"" + colors[order[i]] + "\"/>\n";
    svg += "<text " + fmt("x=\"%.1f\" y=\"%.1f\"", lx + 14.0, ly + 5.0) +
           " font-family=\"sans-serif\" font-size=\"13\">" + escape_xml(order[i]) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace specdim::tools
