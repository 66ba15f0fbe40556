#pragma once

#include <string>
#include <vector>

namespace concentric::cli {

struct PlotSeries {
    std::vector<double> x;
    std::vector<double> y;
    std::string color;  // any SVG color
    std::string label;
};

// Self-contained SVG line plot with a linear frame, ticks and a legend.
std::string render_svg(const std::vector<PlotSeries>& series, const std::string& x_label,
                       const std::string& y_label);

}  // namespace concentric::cli
