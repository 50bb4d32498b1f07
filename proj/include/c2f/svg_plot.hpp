#pragma once
#include <string>
#include <vector>

namespace c2f {

struct PlotSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> ci;  // optional symmetric error bars (empty = none)
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_y = false;   // positive values plotted on a log10 axis
    bool log2_x = false;  // tick labels at the raw x values, spaced by log2
};

// Deterministic byte output for fixed input: fixed canvas, fixed palette,
// fixed number formatting, no timestamps.
void render_line_plot(const std::string& path, const PlotSpec& spec,
                      const std::vector<PlotSeries>& series);

}  // namespace c2f
