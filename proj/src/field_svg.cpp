#include "phs/field_svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace phs {

namespace {

constexpr double kCanvas = 600.0;

std::string xml_escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string fixed(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace

std::string render_field_svg(const FieldGrid& field, const PointSet& nodes, const std::string& description)
{
    const GridSpec& g = field.grid;
    const double wx = g.x_max - g.x_min;
    const double wy = g.y_max - g.y_min;
    auto px = [&](double x) { return wx > 0 ? (x - g.x_min) / wx * kCanvas : kCanvas / 2; };
    auto py = [&](double y) { return wy > 0 ? kCanvas - (y - g.y_min) / wy * kCanvas : kCanvas / 2; };

    // Shade by log|f| relative to the field's range.
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < field.values.size(); ++k) {
        const double a = std::abs(field.values.data()[k]);
        if (a > 0.0 && std::isfinite(a)) {
            lo = std::min(lo, std::log10(a));
            hi = std::max(hi, std::log10(a));
        }
    }
    if (!(hi > lo)) hi = lo + 1.0;

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kCanvas << "\" height=\"" << kCanvas
        << "\" viewBox=\"0 0 " << kCanvas << ' ' << kCanvas << "\">\n"
        << "<desc>" << xml_escape(description) << "</desc>\n"
        << "<rect x=\"0\" y=\"0\" width=\"" << kCanvas << "\" height=\"" << kCanvas << "\" fill=\"#ffffff\"/>\n";

    const double cw = g.nx > 1 ? kCanvas / (g.nx - 1) : kCanvas;
    const double ch = g.ny > 1 ? kCanvas / (g.ny - 1) : kCanvas;
    svg << "<g id=\"bands\" stroke=\"none\">\n";
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double v = field.values(j, i);
            const double level = v == 0.0 ? 0.0 : std::clamp((std::log10(std::abs(v)) - lo) / (hi - lo), 0.0, 1.0);
            // Quantize to ten bands.
            const int band = static_cast<int>(std::floor(level * 9.999));
            const int shade = 235 - band * 20;
            const int r = v > 0 ? 235 : shade;
            const int b = v < 0 ? 235 : shade;
            const int gr = v == 0 ? 235 : shade;
            svg << "<rect x=\"" << fixed(px(g.x(i)) - cw / 2) << "\" y=\"" << fixed(py(g.y(j)) - ch / 2)
                << "\" width=\"" << fixed(cw) << "\" height=\"" << fixed(ch) << "\" fill=\"rgb(" << r << ',' << gr
                << ',' << b << ")\"/>\n";
        }
    }
    svg << "</g>\n<g id=\"zero-set\" stroke=\"#000000\" stroke-width=\"1.5\" fill=\"none\">\n";

    // Marching squares on the sign of f.
    auto crossing = [&](double x0, double y0, double v0, double x1, double y1, double v1) {
        const double t = v0 == v1 ? 0.5 : v0 / (v0 - v1);
        return std::pair{x0 + t * (x1 - x0), y0 + t * (y1 - y0)};
    };
    for (int j = 0; j + 1 < g.ny; ++j) {
        for (int i = 0; i + 1 < g.nx; ++i) {
            const double x0 = g.x(i), x1 = g.x(i + 1), y0 = g.y(j), y1 = g.y(j + 1);
            const double v00 = field.values(j, i), v10 = field.values(j, i + 1);
            const double v01 = field.values(j + 1, i), v11 = field.values(j + 1, i + 1);
            std::vector<std::pair<double, double>> hits;
            if ((v00 < 0) != (v10 < 0)) hits.push_back(crossing(x0, y0, v00, x1, y0, v10));
            if ((v10 < 0) != (v11 < 0)) hits.push_back(crossing(x1, y0, v10, x1, y1, v11));
            if ((v11 < 0) != (v01 < 0)) hits.push_back(crossing(x1, y1, v11, x0, y1, v01));
            if ((v01 < 0) != (v00 < 0)) hits.push_back(crossing(x0, y1, v01, x0, y0, v00));
            for (std::size_t h = 0; h + 1 < hits.size(); h += 2) {
                svg << "<line x1=\"" << fixed(px(hits[h].first)) << "\" y1=\"" << fixed(py(hits[h].second))
                    << "\" x2=\"" << fixed(px(hits[h + 1].first)) << "\" y2=\"" << fixed(py(hits[h + 1].second))
                    << "\"/>\n";
            }
        }
    }
    svg << "</g>\n<g id=\"exact-zeros\" fill=\"#000000\">\n";
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            if (field.values(j, i) == 0.0)
                svg << "<circle cx=\"" << fixed(px(g.x(i))) << "\" cy=\"" << fixed(py(g.y(j))) << "\" r=\"1.5\"/>\n";
    svg << "</g>\n<g id=\"nodes\" fill=\"#ffcc00\" stroke=\"#000000\">\n";
    for (int k = 0; k < nodes.size(); ++k)
        svg << "<circle cx=\"" << fixed(px(nodes.coords()(0, k))) << "\" cy=\"" << fixed(py(nodes.coords()(1, k)))
            << "\" r=\"4\"/>\n";
    svg << "</g>\n</svg>\n";
    return svg.str();
}

}  // namespace phs
