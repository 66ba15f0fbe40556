#include "concentric/cli/svg_plot.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace concentric::cli {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 20.0;
constexpr double kBottom = 50.0;

// 1, 2 or 5 times a power of ten, giving roughly `target` intervals.
double nice_step(double span, int target) {
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (m * mag >= raw) return m * mag;
    }
    return 10.0 * mag;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string render_svg(const std::vector<PlotSeries>& series, const std::string& x_label,
                       const std::string& y_label) {
    double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
    double y_min = 0.0, y_max = -std::numeric_limits<double>::infinity();
    for (const auto& s : series) {
        for (double v : s.x) x_min = std::min(x_min, v), x_max = std::max(x_max, v);
        for (double v : s.y) y_min = std::min(y_min, v), y_max = std::max(y_max, v);
    }
    if (!(x_max > x_min)) x_max = x_min + 1.0;
    if (!(y_max > y_min)) y_max = y_min + 1.0;
    y_max += 0.05 * (y_max - y_min);

    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    const auto px = [&](double x) { return kLeft + (x - x_min) / (x_max - x_min) * plot_w; };
    const auto py = [&](double y) { return kTop + (1.0 - (y - y_min) / (y_max - y_min)) * plot_h; };

    std::string svg = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n"
        "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        "<rect x=\"{2}\" y=\"{3}\" width=\"{4}\" height=\"{5}\" fill=\"none\" stroke=\"black\"/>\n",
        kWidth, kHeight, kLeft, kTop, plot_w, plot_h);

    const double xs = nice_step(x_max - x_min, 6);
    for (double t = std::ceil(x_min / xs) * xs; t <= x_max + 1e-9 * xs; t += xs) {
        svg += fmt::format(
            "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"black\"/>"
            "<text x=\"{0:.2f}\" y=\"{3:.2f}\" font-size=\"12\" text-anchor=\"middle\">{4:g}</text>\n",
            px(t), kTop + plot_h, kTop + plot_h - 5, kTop + plot_h + 16, t);
    }
    const double ys = nice_step(y_max - y_min, 5);
    for (double t = std::ceil(y_min / ys) * ys; t <= y_max + 1e-9 * ys; t += ys) {
        svg += fmt::format(
            "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke=\"black\"/>"
            "<text x=\"{3:.2f}\" y=\"{4:.2f}\" font-size=\"12\" text-anchor=\"end\">{5:g}</text>\n",
            kLeft, py(t), kLeft + 5, kLeft - 6, py(t) + 4, t);
    }
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"13\" text-anchor=\"middle\">{}</text>\n",
                       kLeft + plot_w / 2, kHeight - 10, escape(x_label));
    svg += fmt::format(
        "<text x=\"16\" y=\"{0:.2f}\" font-size=\"13\" text-anchor=\"middle\" "
        "transform=\"rotate(-90 16 {0:.2f})\">{1}</text>\n",
        kTop + plot_h / 2, escape(y_label));

    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        std::string points;
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            points += fmt::format("{:.2f},{:.2f} ", px(s.x[i]), py(s.y[i]));
        }
        svg += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
                           s.color, points);
        const double ly = kTop + 16 + 16 * static_cast<double>(k);
        svg += fmt::format(
            "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke=\"{3}\" stroke-width=\"2\"/>"
            "<text x=\"{4:.2f}\" y=\"{5:.2f}\" font-size=\"12\">{6}</text>\n",
            kLeft + plot_w - 130, ly, kLeft + plot_w - 110, s.color, kLeft + plot_w - 104, ly + 4,
            escape(s.label));
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace concentric::cli
