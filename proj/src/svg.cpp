#include "concentra/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace concentra {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kMargin = 60.0;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

struct Scale {
    double lo, hi, pixel_lo, pixel_hi;

    double operator()(double v) const {
        if (hi == lo) return (pixel_lo + pixel_hi) / 2.0;
        return pixel_lo + (v - lo) / (hi - lo) * (pixel_hi - pixel_lo);
    }
};

void open_svg(std::ostringstream& out, const std::string& title) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
        << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
        << kHeight << "\">\n";
    out << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "  <text x=\"" << kWidth / 2
        << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"16\">"
        << title << "</text>\n";
}

void axis_frame(std::ostringstream& out) {
    out << "  <line x1=\"" << kMargin << "\" y1=\"" << kHeight - kMargin
        << "\" x2=\"" << kWidth - kMargin << "\" y2=\"" << kHeight - kMargin
        << "\" stroke=\"black\"/>\n";
    out << "  <line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\""
        << kMargin << "\" y2=\"" << kHeight - kMargin << "\" stroke=\"black\"/>\n";
}

} // namespace

std::string scatter_svg(const std::vector<FeaturePoint>& points,
                        const std::vector<std::vector<double>>& centroids,
                        const std::string& title, const std::string& x_label,
                        const std::string& y_label) {
    double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
    bool first = true;
    auto widen = [&](double x, double y) {
        if (first) {
            xmin = xmax = x;
            ymin = ymax = y;
            first = false;
            return;
        }
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
    };
    for (const auto& p : points)
        if (p.coords.size() >= 2) widen(p.coords[0], p.coords[1]);
    for (const auto& c : centroids)
        if (c.size() >= 2) widen(c[0], c[1]);
    const double xpad = (xmax - xmin) * 0.08 + 1e-6;
    const double ypad = (ymax - ymin) * 0.08 + 1e-6;

    const Scale sx{xmin - xpad, xmax + xpad, kMargin, kWidth - kMargin};
    const Scale sy{ymin - ypad, ymax + ypad, kHeight - kMargin, kMargin};

    std::ostringstream out;
    open_svg(out, title);
    axis_frame(out);
    out << "  <text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 16
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
        << x_label << "</text>\n";
    out << "  <text x=\"18\" y=\"" << kHeight / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
           "transform=\"rotate(-90 18 "
        << kHeight / 2 << ")\">" << y_label << "</text>\n";
    out << "  <text x=\"" << kMargin << "\" y=\"" << kHeight - kMargin + 16
        << "\" font-family=\"sans-serif\" font-size=\"10\">" << num(xmin)
        << "</text>\n";
    out << "  <text x=\"" << kWidth - kMargin << "\" y=\""
        << kHeight - kMargin + 16
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">"
        << num(xmax) << "</text>\n";
    out << "  <text x=\"" << kMargin - 6 << "\" y=\"" << kHeight - kMargin
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">"
        << num(ymin) << "</text>\n";
    out << "  <text x=\"" << kMargin - 6 << "\" y=\"" << kMargin
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">"
        << num(ymax) << "</text>\n";

    for (const auto& p : points) {
        if (p.coords.size() < 2) continue;
        const double cx = sx(p.coords[0]);
        const double cy = sy(p.coords[1]);
        out << "  <circle cx=\"" << num(cx) << "\" cy=\"" << num(cy)
            << "\" r=\"4\" fill=\"steelblue\"/>\n";
        out << "  <text x=\"" << num(cx + 6) << "\" y=\"" << num(cy - 6)
            << "\" font-family=\"sans-serif\" font-size=\"10\">" << p.label
            << "</text>\n";
    }
    for (const auto& c : centroids) {
        if (c.size() < 2) continue;
        const double cx = sx(c[0]);
        const double cy = sy(c[1]);
        out << "  <line x1=\"" << num(cx - 7) << "\" y1=\"" << num(cy)
            << "\" x2=\"" << num(cx + 7) << "\" y2=\"" << num(cy)
            << "\" stroke=\"crimson\" stroke-width=\"2\"/>\n";
        out << "  <line x1=\"" << num(cx) << "\" y1=\"" << num(cy - 7)
            << "\" x2=\"" << num(cx) << "\" y2=\"" << num(cy + 7)
            << "\" stroke=\"crimson\" stroke-width=\"2\"/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string boxplot_svg(const FiveNumberSummary& summary,
                        const std::string& title) {
    const double lo = std::min(summary.min, summary.lower_fence);
    const double hi = std::max(summary.max, summary.upper_fence);
    const double pad = (hi - lo) * 0.08 + 1e-6;
    const Scale sy{lo - pad, hi + pad, kHeight - kMargin, kMargin};

    const double box_left = kWidth / 2 - 60;
    const double box_right = kWidth / 2 + 60;
    const double mid = kWidth / 2;

    std::ostringstream out;
    open_svg(out, title);
    axis_frame(out);
    out << "  <text x=\"" << kMargin - 6 << "\" y=\"" << kHeight - kMargin
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">"
        << num(lo) << "</text>\n";
    out << "  <text x=\"" << kMargin - 6 << "\" y=\"" << kMargin
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">"
        << num(hi) << "</text>\n";

    // box between the hinges, line at the median
    out << "  <rect x=\"" << num(box_left) << "\" y=\""
        << num(sy(summary.upper_hinge)) << "\" width=\"" << num(box_right - box_left)
        << "\" height=\"" << num(sy(summary.lower_hinge) - sy(summary.upper_hinge))
        << "\" fill=\"lightsteelblue\" stroke=\"black\"/>\n";
    out << "  <line x1=\"" << num(box_left) << "\" y1=\"" << num(sy(summary.median))
        << "\" x2=\"" << num(box_right) << "\" y2=\"" << num(sy(summary.median))
        << "\" stroke=\"black\" stroke-width=\"2\"/>\n";

    // whiskers at the fences
    for (double fence : {summary.lower_fence, summary.upper_fence}) {
        const double from =
            fence == summary.lower_fence ? summary.lower_hinge : summary.upper_hinge;
        out << "  <line x1=\"" << num(mid) << "\" y1=\"" << num(sy(from))
            << "\" x2=\"" << num(mid) << "\" y2=\"" << num(sy(fence))
            << "\" stroke=\"black\" stroke-dasharray=\"4 3\"/>\n";
        out << "  <line x1=\"" << num(mid - 30) << "\" y1=\"" << num(sy(fence))
            << "\" x2=\"" << num(mid + 30) << "\" y2=\"" << num(sy(fence))
            << "\" stroke=\"black\"/>\n";
    }

    for (const auto& outlier : summary.outliers) {
        const double cy = sy(outlier.value);
        out << "  <circle cx=\"" << num(mid) << "\" cy=\"" << num(cy)
            << "\" r=\"4\" fill=\"none\" stroke=\"crimson\"/>\n";
        out << "  <text x=\"" << num(mid + 10) << "\" y=\"" << num(cy + 4)
            << "\" font-family=\"sans-serif\" font-size=\"10\">" << outlier.label
            << " (" << num(outlier.value) << ")</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

} // namespace concentra
