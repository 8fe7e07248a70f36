#include "nowcast/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "nowcast/errors.hpp"

namespace nowcast::svg {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// Round tick step to 1/2/5 * 10^k covering roughly `target` intervals.
double nice_step(double span, int target) {
    if (span <= 0.0) return 1.0;
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double r = raw / mag;
    if (r < 1.5) return mag;
    if (r < 3.5) return 2.0 * mag;
    if (r < 7.5) return 5.0 * mag;
    return 10.0 * mag;
}

struct Extent {
    double lo = 0.0, hi = 1.0;
};

Extent extent_of(const std::vector<Series>& series, bool use_x) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& s : series) {
        const auto& v = use_x ? s.x : s.y;
        for (double val : v) {
            lo = std::min(lo, val);
            hi = std::max(hi, val);
        }
    }
    if (!(lo <= hi)) return {0.0, 1.0};
    if (lo == hi) {
        lo -= 0.5;
        hi += 0.5;
    }
    return {lo, hi};
}

} // namespace

void write_chart(const std::string& path, const std::vector<Panel>& panels,
                 int width, int panel_height) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write '" + path + "'");

    const int margin_left = 70, margin_right = 20, margin_top = 36, margin_bottom = 48;
    const int total_height = panel_height * static_cast<int>(panels.size());
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
        << "\" height=\"" << total_height << "\" font-family=\"sans-serif\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    for (std::size_t p = 0; p < panels.size(); ++p) {
        const Panel& panel = panels[p];
        const double top = static_cast<double>(p) * panel_height + margin_top;
        const double left = margin_left;
        const double plot_w = width - margin_left - margin_right;
        const double plot_h = panel_height - margin_top - margin_bottom;
        const Extent ex = extent_of(panel.series, true);
        const Extent ey = extent_of(panel.series, false);

        auto sx = [&](double x) { return left + (x - ex.lo) / (ex.hi - ex.lo) * plot_w; };
        auto sy = [&](double y) { return top + plot_h - (y - ey.lo) / (ey.hi - ey.lo) * plot_h; };

        out << "<text x=\"" << left << "\" y=\"" << top - 14
            << "\" font-size=\"14\" font-weight=\"bold\">" << panel.title << "</text>\n";

        // gridlines and ticks
        const double step_x = nice_step(ex.hi - ex.lo, 8);
        const double step_y = nice_step(ey.hi - ey.lo, 5);
        for (double x = std::ceil(ex.lo / step_x) * step_x; x <= ex.hi + 1e-9 * step_x;
             x += step_x) {
            out << "<line x1=\"" << num(sx(x)) << "\" y1=\"" << num(top) << "\" x2=\""
                << num(sx(x)) << "\" y2=\"" << num(top + plot_h)
                << "\" stroke=\"#e0e0e0\"/>\n";
            out << "<text x=\"" << num(sx(x)) << "\" y=\"" << num(top + plot_h + 16)
                << "\" font-size=\"11\" text-anchor=\"middle\">" << num(x) << "</text>\n";
        }
        for (double y = std::ceil(ey.lo / step_y) * step_y; y <= ey.hi + 1e-9 * step_y;
             y += step_y) {
            out << "<line x1=\"" << num(left) << "\" y1=\"" << num(sy(y)) << "\" x2=\""
                << num(left + plot_w) << "\" y2=\"" << num(sy(y))
                << "\" stroke=\"#e0e0e0\"/>\n";
            out << "<text x=\"" << num(left - 6) << "\" y=\"" << num(sy(y) + 4)
                << "\" font-size=\"11\" text-anchor=\"end\">" << num(y) << "</text>\n";
        }
        out << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\""
            << num(plot_w) << "\" height=\"" << num(plot_h)
            << "\" fill=\"none\" stroke=\"black\"/>\n";

        // axis labels
        out << "<text x=\"" << num(left + plot_w / 2) << "\" y=\""
            << num(top + plot_h + 36) << "\" font-size=\"12\" text-anchor=\"middle\">"
            << panel.x_label << "</text>\n";
        out << "<text x=\"" << num(left - 52) << "\" y=\"" << num(top + plot_h / 2)
            << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 "
            << num(left - 52) << ' ' << num(top + plot_h / 2) << ")\">" << panel.y_label
            << "</text>\n";

        for (std::size_t k = 0; k < panel.series.size(); ++k) {
            const Series& s = panel.series[k];
            const char* color = kPalette[k % (sizeof kPalette / sizeof kPalette[0])];
            out << "<polyline fill=\"none\" stroke=\"" << color
                << "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (i) out << ' ';
                out << num(sx(s.x[i])) << ',' << num(sy(s.y[i]));
            }
            out << "\"/>\n";
            const double ly = top + 16 + 16 * static_cast<double>(k);
            out << "<line x1=\"" << num(left + plot_w - 150) << "\" y1=\"" << num(ly - 4)
                << "\" x2=\"" << num(left + plot_w - 126) << "\" y2=\"" << num(ly - 4)
                << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
            out << "<text x=\"" << num(left + plot_w - 120) << "\" y=\"" << num(ly)
                << "\" font-size=\"11\">" << s.label << "</text>\n";
        }
    }
    out << "</svg>\n";
}

} // namespace nowcast::svg
