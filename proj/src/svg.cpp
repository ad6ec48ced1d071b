#include "qsmooth/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace qsmooth {

namespace {

std::string fmt(const char *pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), pattern, v);
    return std::string(buf);
}

std::string escape_text(const std::string &s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        default:
            out += c;
        }
    }
    return out;
}

std::string lerp_blue(double f) {
    f = std::clamp(f, 0.0, 1.0);
    int r = static_cast<int>(std::lround(247.0 + f * (8.0 - 247.0)));
    int g = static_cast<int>(std::lround(251.0 + f * (48.0 - 251.0)));
    int b = static_cast<int>(std::lround(255.0 + f * (107.0 - 255.0)));
    char buf[32];
    std::snprintf(buf, sizeof(buf), "rgb(%d,%d,%d)", r, g, b);
    return std::string(buf);
}

const char *kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                          "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
constexpr int kPaletteSize = 8;

std::string text_el(double x, double y, const std::string &body, int size,
                    const char *anchor, const char *fill = "#000000",
                    const char *extra = "") {
    std::string out = "<text x=\"" + fmt("%.1f", x) + "\" y=\"" + fmt("%.1f", y) +
                      "\" font-family=\"sans-serif\" font-size=\"" + std::to_string(size) +
                      "\" text-anchor=\"" + anchor + "\" fill=\"" + fill + "\"" + extra +
                      ">" + escape_text(body) + "</text>\n";
    return out;
}

} // namespace

std::string render_heatmap_svg(const std::string &title, const std::string &note,
                               int max_r_add, int max_r_del,
                               const std::vector<HeatmapCellData> &cells) {
    if (max_r_add < 0 || max_r_del < 0) {
        throw std::invalid_argument("heatmap extent must be nonnegative");
    }
    const double cell = 48.0;
    const double ml = 96.0;
    const double mt = 64.0;
    const double grid_w = (max_r_add + 1) * cell;
    const double grid_h = (max_r_del + 1) * cell;
    const double width = ml + grid_w + 48.0;
    const double height = mt + grid_h + 72.0;

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt("%.0f", width) +
           "\" height=\"" + fmt("%.0f", height) + "\" viewBox=\"0 0 " + fmt("%.0f", width) +
           " " + fmt("%.0f", height) + "\">\n";
    out += "<desc>" + escape_text(note) + "</desc>\n";
    out += "<rect x=\"0\" y=\"0\" width=\"" + fmt("%.0f", width) + "\" height=\"" +
           fmt("%.0f", height) + "\" fill=\"#ffffff\"/>\n";
    out += text_el(width / 2.0, 30.0, title, 16, "middle");

    for (const HeatmapCellData &c : cells) {
        if (c.r_add < 0 || c.r_add > max_r_add || c.r_del < 0 || c.r_del > max_r_del) {
            throw std::invalid_argument("heatmap cell outside the declared extent");
        }
        double x = ml + c.r_add * cell;
        double y = mt + c.r_del * cell;
        out += "<rect x=\"" + fmt("%.1f", x) + "\" y=\"" + fmt("%.1f", y) + "\" width=\"" +
               fmt("%.1f", cell) + "\" height=\"" + fmt("%.1f", cell) + "\" fill=\"" +
               lerp_blue(c.fraction) + "\" stroke=\"#cccccc\"/>\n";
        const char *fg = c.fraction > 0.5 ? "#ffffff" : "#000000";
        out += text_el(x + cell / 2.0, y + cell / 2.0 + 4.0, fmt("%.2f", c.fraction), 11,
                       "middle", fg);
    }

    for (int ra = 0; ra <= max_r_add; ++ra) {
        out += text_el(ml + ra * cell + cell / 2.0, mt + grid_h + 18.0, std::to_string(ra),
                       12, "middle");
    }
    for (int rd = 0; rd <= max_r_del; ++rd) {
        out += text_el(ml - 10.0, mt + rd * cell + cell / 2.0 + 4.0, std::to_string(rd), 12,
                       "end");
    }
    out += text_el(ml + grid_w / 2.0, mt + grid_h + 44.0, "addition radius", 13, "middle");
    out += text_el(24.0, mt + grid_h / 2.0, "deletion radius", 13, "middle",
                   "#000000",
                   (" transform=\"rotate(-90 24 " + fmt("%.1f", mt + grid_h / 2.0) + ")\"")
                       .c_str());
    out += "</svg>\n";
    return out;
}

std::string render_line_chart_svg(const std::string &title, const std::string &note,
                                  const std::string &x_label, const std::string &y_label,
                                  const std::vector<ChartSeries> &series, bool log_x,
                                  bool log_y) {
    const double width = 720.0;
    const double height = 480.0;
    const double ml = 84.0;
    const double mt = 56.0;
    const double pw = 560.0;
    const double ph = 340.0;

    struct Pt {
        double x, y;
    };
    std::vector<std::vector<Pt>> transformed(series.size());
    double min_x = 0.0, max_x = 0.0, min_y = 0.0, max_y = 0.0;
    bool any = false;
    for (size_t s = 0; s < series.size(); ++s) {
        if (series[s].xs.size() != series[s].ys.size()) {
            throw std::invalid_argument("series '" + series[s].label +
                                        "' has mismatched x/y lengths");
        }
        for (size_t i = 0; i < series[s].xs.size(); ++i) {
            double x = series[s].xs[i];
            double y = series[s].ys[i];
            if ((log_x && x <= 0.0) || (log_y && y <= 0.0)) {
                continue;
            }
            Pt p{log_x ? std::log10(x) : x, log_y ? std::log10(y) : y};
            if (!any) {
                min_x = max_x = p.x;
                min_y = max_y = p.y;
                any = true;
            } else {
                min_x = std::min(min_x, p.x);
                max_x = std::max(max_x, p.x);
                min_y = std::min(min_y, p.y);
                max_y = std::max(max_y, p.y);
            }
            transformed[s].push_back(p);
        }
    }
    if (!any) {
        min_x = min_y = 0.0;
        max_x = max_y = 1.0;
    }
    if (max_x - min_x < 1e-12) {
        min_x -= 0.5;
        max_x += 0.5;
    }
    if (max_y - min_y < 1e-12) {
        min_y -= 0.5;
        max_y += 0.5;
    }
    double pad_x = 0.05 * (max_x - min_x);
    double pad_y = 0.08 * (max_y - min_y);
    min_x -= pad_x;
    max_x += pad_x;
    min_y -= pad_y;
    max_y += pad_y;

    auto px = [&](double x) { return ml + (x - min_x) / (max_x - min_x) * pw; };
    auto py = [&](double y) { return mt + ph - (y - min_y) / (max_y - min_y) * ph; };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt("%.0f", width) +
           "\" height=\"" + fmt("%.0f", height) + "\" viewBox=\"0 0 " + fmt("%.0f", width) +
           " " + fmt("%.0f", height) + "\">\n";
    out += "<desc>" + escape_text(note) + "</desc>\n";
    out += "<rect x=\"0\" y=\"0\" width=\"" + fmt("%.0f", width) + "\" height=\"" +
           fmt("%.0f", height) + "\" fill=\"#ffffff\"/>\n";
    out += text_el(width / 2.0, 28.0, title, 16, "middle");

    out += "<rect x=\"" + fmt("%.1f", ml) + "\" y=\"" + fmt("%.1f", mt) + "\" width=\"" +
           fmt("%.1f", pw) + "\" height=\"" + fmt("%.1f", ph) +
           "\" fill=\"none\" stroke=\"#000000\"/>\n";

    auto axis_ticks = [](double lo, double hi, bool log_axis) {
        std::vector<double> ticks;
        if (log_axis) {
            for (int e = static_cast<int>(std::ceil(lo)); e <= static_cast<int>(std::floor(hi));
                 ++e) {
                ticks.push_back(static_cast<double>(e));
            }
        }
        if (ticks.size() < 2) {
            ticks.clear();
            for (int i = 0; i <= 5; ++i) {
                ticks.push_back(lo + (hi - lo) * i / 5.0);
            }
        }
        return ticks;
    };

    for (double tx : axis_ticks(min_x, max_x, log_x)) {
        double gx = px(tx);
        out += "<line x1=\"" + fmt("%.1f", gx) + "\" y1=\"" + fmt("%.1f", mt + ph) +
               "\" x2=\"" + fmt("%.1f", gx) + "\" y2=\"" + fmt("%.1f", mt + ph + 6.0) +
               "\" stroke=\"#000000\"/>\n";
        std::string label = log_x ? fmt("%.3g", std::pow(10.0, tx)) : fmt("%.4g", tx);
        out += text_el(gx, mt + ph + 22.0, label, 11, "middle");
    }
    for (double ty : axis_ticks(min_y, max_y, log_y)) {
        double gy = py(ty);
        out += "<line x1=\"" + fmt("%.1f", ml - 6.0) + "\" y1=\"" + fmt("%.1f", gy) +
               "\" x2=\"" + fmt("%.1f", ml) + "\" y2=\"" + fmt("%.1f", gy) +
               "\" stroke=\"#000000\"/>\n";
        std::string label = log_y ? fmt("%.3g", std::pow(10.0, ty)) : fmt("%.4g", ty);
        out += text_el(ml - 10.0, gy + 4.0, label, 11, "end");
    }
    out += text_el(ml + pw / 2.0, mt + ph + 44.0, x_label, 13, "middle");
    out += text_el(24.0, mt + ph / 2.0, y_label, 13, "middle", "#000000",
                   (" transform=\"rotate(-90 24 " + fmt("%.1f", mt + ph / 2.0) + ")\"")
                       .c_str());

    for (size_t s = 0; s < series.size(); ++s) {
        const char *color = kPalette[s % kPaletteSize];
        if (!transformed[s].empty()) {
            std::string pts;
            for (const Pt &p : transformed[s]) {
                pts += fmt("%.2f", px(p.x)) + "," + fmt("%.2f", py(p.y)) + " ";
            }
            out += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + color +
                   "\" stroke-width=\"2\"/>\n";
            for (const Pt &p : transformed[s]) {
                out += "<circle cx=\"" + fmt("%.2f", px(p.x)) + "\" cy=\"" +
                       fmt("%.2f", py(p.y)) + "\" r=\"3\" fill=\"" + color + "\"/>\n";
            }
        }
        double ly = mt + 16.0 + 18.0 * static_cast<double>(s);
        out += "<line x1=\"" + fmt("%.1f", ml + pw - 150.0) + "\" y1=\"" + fmt("%.1f", ly - 4.0) +
               "\" x2=\"" + fmt("%.1f", ml + pw - 126.0) + "\" y2=\"" + fmt("%.1f", ly - 4.0) +
               "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
        out += text_el(ml + pw - 120.0, ly, series[s].label, 11, "start");
    }

    out += "</svg>\n";
    return out;
}

} // namespace qsmooth
