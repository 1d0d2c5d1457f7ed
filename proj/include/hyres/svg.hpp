#ifndef HYRES_SVG_HPP
#define HYRES_SVG_HPP

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hyres/errors.hpp"

namespace hyres {

/// Standalone 800x600 line plot: one polyline, axis ticks at 5 even
/// divisions, byte-deterministic. A collapsed y-range draws a flat line at
/// mid-height instead of dividing by zero.
inline void emit_curve_svg(const std::vector<std::pair<double, double>>& points,
                           const std::string& x_label, const std::string& y_label,
                           const std::string& path) {
    if (points.size() < 2) throw validation_error("emit_curve_svg: need at least 2 points");
    constexpr double W = 800.0, H = 600.0;
    constexpr double ml = 70.0, mr = 20.0, mt = 20.0, mb = 50.0; // plot margins
    double xmin = points[0].first, xmax = points[0].first;
    double ymin = points[0].second, ymax = points[0].second;
    for (const auto& [x, y] : points) {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
    }
    const bool flat_x = xmax == xmin;
    const bool flat_y = ymax == ymin;
    const double pw = W - ml - mr, ph = H - mt - mb;
    auto px = [&](double x) {
        return flat_x ? ml + pw / 2.0 : ml + (x - xmin) / (xmax - xmin) * pw;
    };
    auto py = [&](double y) {
        return flat_y ? mt + ph / 2.0 : mt + (ymax - y) / (ymax - ymin) * ph;
    };
    std::ostringstream os;
    os.precision(17);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << (H - mb) << "\" x2=\"" << (W - mr)
       << "\" y2=\"" << (H - mb) << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
       << (H - mb) << "\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 5; ++t) {
        const double fx = ml + pw * t / 5.0;
        const double fy = mt + ph * t / 5.0;
        const double xv = flat_x ? xmin : xmin + (xmax - xmin) * t / 5.0;
        const double yv = flat_y ? ymin : ymax - (ymax - ymin) * t / 5.0;
        os << "<line x1=\"" << fx << "\" y1=\"" << (H - mb) << "\" x2=\"" << fx << "\" y2=\""
           << (H - mb + 6.0) << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << fx << "\" y=\"" << (H - mb + 20.0)
           << "\" font-size=\"11\" text-anchor=\"middle\">" << xv << "</text>\n";
        os << "<line x1=\"" << (ml - 6.0) << "\" y1=\"" << fy << "\" x2=\"" << ml << "\" y2=\""
           << fy << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << (ml - 10.0) << "\" y=\"" << (fy + 4.0)
           << "\" font-size=\"11\" text-anchor=\"end\">" << yv << "</text>\n";
    }
    os << "<text x=\"" << (ml + pw / 2.0) << "\" y=\"" << (H - 8.0)
       << "\" font-size=\"13\" text-anchor=\"middle\">" << x_label << "</text>\n";
    os << "<text x=\"14\" y=\"" << (mt + ph / 2.0)
       << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
       << (mt + ph / 2.0) << ")\">" << y_label << "</text>\n";
    os << "<polyline fill=\"none\" stroke=\"#1565c0\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < points.size(); ++k) {
        if (k) os << " ";
        os << px(points[k].first) << "," << py(points[k].second);
    }
    os << "\"/>\n</svg>\n";
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw io_error("emit_curve_svg: cannot open '" + path + "'");
    f << os.str();
}

} // namespace hyres

#endif
