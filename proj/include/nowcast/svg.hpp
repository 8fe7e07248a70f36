#pragma once

#include <string>
#include <vector>

namespace nowcast::svg {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct Panel {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
};

/// Self-contained static line chart: one or more panels stacked vertically,
/// each with axes, tick labels, and a legend. No external dependencies.
void write_chart(const std::string& path, const std::vector<Panel>& panels,
                 int width = 880, int panel_height = 320);

} // namespace nowcast::svg
