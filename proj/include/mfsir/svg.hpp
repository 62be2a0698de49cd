#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "mfsir/csv.hpp"
#include "mfsir/error.hpp"

// Minimal SVG line charts, enough for convergence curves and
// metric-vs-fraction plots without pulling in a plotting dependency.

namespace mfsir::svg {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

inline void write_line_chart(const std::string& path, const std::string& title,
                             const std::vector<Series>& series) {
    static constexpr const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                              "#9467bd", "#ff7f0e", "#8c564b"};
    constexpr double w = 640, h = 420, ml = 70, mr = 20, mt = 40, mb = 45;

    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    bool any = false;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            if (!any) {
                xmin = xmax = s.x[i];
                ymin = ymax = s.y[i];
                any = true;
            }
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;
    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (w - ml - mr); };
    auto py = [&](double y) { return h - mb - (y - ymin) / (ymax - ymin) * (h - mt - mb); };

    std::ofstream out(path);
    if (!out) throw data_error("cannot open for writing: " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << w / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
        << title << "</text>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr << "\" y2=\""
        << h - mb << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << h - mb
        << "\" stroke=\"black\"/>\n";
    for (int tick = 0; tick <= 4; ++tick) {
        const double xv = xmin + (xmax - xmin) * tick / 4.0;
        const double yv = ymin + (ymax - ymin) * tick / 4.0;
        out << "<text x=\"" << px(xv) << "\" y=\"" << h - mb + 16
            << "\" text-anchor=\"middle\">" << csv::fmt(std::round(xv * 1e4) / 1e4)
            << "</text>\n";
        out << "<text x=\"" << ml - 6 << "\" y=\"" << py(yv) + 4
            << "\" text-anchor=\"end\">" << csv::fmt(std::round(yv * 1e4) / 1e4)
            << "</text>\n";
    }
    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const char* color = palette[si % 6];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i)
            out << px(s.x[i]) << "," << py(s.y[i]) << " ";
        out << "\"/>\n";
        out << "<text x=\"" << w - mr - 6 << "\" y=\"" << mt + 16 * static_cast<double>(si)
            << "\" text-anchor=\"end\" fill=\"" << color << "\">" << s.label << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace mfsir::svg
