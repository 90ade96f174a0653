#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "calib/harness.hpp"

namespace calib {

namespace {

struct Series {
    const char* name;
    const char* color;
    std::vector<std::pair<double, double>> points;  // (log10 T, log10 value)
};

constexpr double kWidth = 720;
constexpr double kHeight = 440;
constexpr double kLeft = 70;
constexpr double kRight = 160;
constexpr double kTop = 40;
constexpr double kBottom = 50;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace

void emit_plot(std::istream& scores_csv, std::ostream& svg) {
    const auto checkpoints = read_scores_csv(scores_csv);

    Series l1{"l1_score", "#1f77b4", {}};
    Series l2{"l2_dist_C", "#d62728", {}};
    for (const auto& c : checkpoints) {
        if (c.rounds <= 0) continue;
        const double x = std::log10(static_cast<double>(c.rounds));
        // zero scores have no place on a log axis
        if (c.l1_score > 0.0 && std::isfinite(c.l1_score)) l1.points.emplace_back(x, std::log10(c.l1_score));
        if (c.l2_distance > 0.0 && std::isfinite(c.l2_distance)) l2.points.emplace_back(x, std::log10(c.l2_distance));
    }

    double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo, y_lo = x_lo, y_hi = -x_lo;
    for (const auto* s : {&l1, &l2})
        for (const auto& [x, y] : s->points) {
            x_lo = std::min(x_lo, x);
            x_hi = std::max(x_hi, x);
            y_lo = std::min(y_lo, y);
            y_hi = std::max(y_hi, y);
        }
    if (!std::isfinite(x_lo)) x_lo = 0, x_hi = 1, y_lo = -1, y_hi = 0;
    x_lo = std::floor(x_lo);
    x_hi = std::max(std::ceil(x_hi), x_lo + 1);
    y_lo = std::floor(y_lo);
    y_hi = std::max(std::ceil(y_hi), y_lo + 1);

    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * plot_w; };
    auto py = [&](double y) { return kTop + (y_hi - y) / (y_hi - y_lo) * plot_h; };

    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << num(kLeft + plot_w / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
        << "Calibration convergence (log-log)</text>\n";

    svg << "<g stroke=\"#dddddd\">\n";
    for (double d = x_lo; d <= x_hi + 1e-9; d += 1.0)
        svg << "<line x1=\"" << num(px(d)) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(px(d)) << "\" y2=\""
            << num(kTop + plot_h) << "\"/>\n";
    for (double d = y_lo; d <= y_hi + 1e-9; d += 1.0)
        svg << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(py(d)) << "\" x2=\"" << num(kLeft + plot_w)
            << "\" y2=\"" << num(py(d)) << "\"/>\n";
    svg << "</g>\n";
    svg << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(plot_w) << "\" height=\""
        << num(plot_h) << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double d = x_lo; d <= x_hi + 1e-9; d += 1.0)
        svg << "<text x=\"" << num(px(d)) << "\" y=\"" << num(kTop + plot_h + 18)
            << "\" text-anchor=\"middle\">1e" << static_cast<int>(d) << "</text>\n";
    for (double d = y_lo; d <= y_hi + 1e-9; d += 1.0)
        svg << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(py(d) + 4) << "\" text-anchor=\"end\">1e"
            << static_cast<int>(d) << "</text>\n";
    svg << "<text x=\"" << num(kLeft + plot_w / 2) << "\" y=\"" << num(kHeight - 10)
        << "\" text-anchor=\"middle\">T (rounds)</text>\n";

    double legend_y = kTop + 10;
    for (const auto* s : {&l1, &l2}) {
        svg << "<g class=\"series\" data-name=\"" << s->name << "\" stroke=\"" << s->color << "\" fill=\"" << s->color
            << "\">\n";
        if (s->points.size() > 1) {
            svg << "<polyline fill=\"none\" stroke-width=\"2\" points=\"";
            for (const auto& [x, y] : s->points) svg << num(px(x)) << ',' << num(py(y)) << ' ';
            svg << "\"/>\n";
        }
        for (const auto& [x, y] : s->points)
            svg << "<circle cx=\"" << num(px(x)) << "\" cy=\"" << num(py(y)) << "\" r=\"3\"/>\n";
        svg << "</g>\n";
        const double lx = kLeft + plot_w + 15;
        svg << "<line x1=\"" << num(lx) << "\" y1=\"" << num(legend_y) << "\" x2=\"" << num(lx + 25) << "\" y2=\""
            << num(legend_y) << "\" stroke=\"" << s->color << "\" stroke-width=\"2\"/>\n"
            << "<text x=\"" << num(lx + 32) << "\" y=\"" << num(legend_y + 4) << "\">" << s->name << "</text>\n";
        legend_y += 20;
    }
    svg << "</svg>\n";
}

}  // namespace calib
