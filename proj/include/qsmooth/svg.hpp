#pragma once

#include <string>
#include <vector>

namespace qsmooth {

struct HeatmapCellData {
    int r_add = 0;
    int r_del = 0;
    double fraction = 0.0;
};

// Certified-fraction grid as a standalone SVG; `note` lands in the <desc>
// element so the rendering documents its own provenance.
std::string render_heatmap_svg(const std::string &title, const std::string &note,
                               int max_r_add, int max_r_del,
                               const std::vector<HeatmapCellData> &cells);

struct ChartSeries {
    std::string label;
    std::vector<double> xs;
    std::vector<double> ys;
};

// Line chart with optional log10 axes; points with nonpositive coordinates
// are dropped from log axes.
std::string render_line_chart_svg(const std::string &title, const std::string &note,
                                  const std::string &x_label, const std::string &y_label,
                                  const std::vector<ChartSeries> &series, bool log_x,
                                  bool log_y);

} // namespace qsmooth
