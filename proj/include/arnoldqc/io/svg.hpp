#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "arnoldqc/spectrum.hpp"

namespace arnoldqc::io {

struct DensityPlot
{
    std::vector<double> x;
    std::vector<double> density;
    std::vector<WellRegion> regions;
    std::string title;
};

namespace detail {

inline std::string fixed(double v, int digits = 2)
{
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

/// 1, 2 or 5 times a power of ten, about range / target.
inline double nice_step(double range, int target = 6)
{
    const double raw = range / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double f : {1.0, 2.0, 5.0})
        if (f * mag >= raw)
            return f * mag;
    return 10.0 * mag;
}

inline std::string escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

} // namespace detail

/// Static line plot of rho(x) with one shaded band per well region and its
/// probability written above it.
inline std::string render_density_svg(const DensityPlot& plot)
{
    if (plot.x.size() < 2 || plot.x.size() != plot.density.size())
        throw std::invalid_argument("render_density_svg: need matching x and density samples");
    constexpr double width = 800, height = 420;
    constexpr double left = 70, right = 20, top = 50, bottom = 50;
    const double pw = width - left - right, ph = height - top - bottom;

    const double x0 = plot.x.front(), x1 = plot.x.back();
    double ymax = *std::max_element(plot.density.begin(), plot.density.end());
    if (!(ymax > 0))
        ymax = 1.0;
    ymax *= 1.1;
    auto sx = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
    auto sy = [&](double y) { return top + ph - y / ymax * ph; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
        << detail::escape(plot.title) << "</text>\n";

    for (const auto& r : plot.regions) {
        const double a = sx(std::max(r.lo, x0)), b = sx(std::min(r.hi, x1));
        if (!(b > a))
            continue;
        svg << "<rect x=\"" << detail::fixed(a) << "\" y=\"" << top << "\" width=\"" << detail::fixed(b - a)
            << "\" height=\"" << ph << "\" fill=\"" << (r.central ? "#fde9c8" : "#d6e6f5") << "\" stroke=\"#bbbbbb\"/>\n";
        svg << "<text x=\"" << detail::fixed(0.5 * (a + b)) << "\" y=\"" << top + 16
            << "\" text-anchor=\"middle\">w=" << detail::fixed(r.weight, 4) << "</text>\n";
    }

    const double xstep = detail::nice_step(x1 - x0);
    for (double t = std::ceil(x0 / xstep) * xstep; t <= x1 + 1e-9 * xstep; t += xstep) {
        const double px = sx(t);
        svg << "<line x1=\"" << detail::fixed(px) << "\" y1=\"" << top + ph << "\" x2=\"" << detail::fixed(px)
            << "\" y2=\"" << top + ph + 5 << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << detail::fixed(px) << "\" y=\"" << top + ph + 19 << "\" text-anchor=\"middle\">"
            << detail::fixed(std::fabs(t) < 1e-12 ? 0.0 : t, xstep < 1 ? 1 : 0) << "</text>\n";
    }
    const double ystep = detail::nice_step(ymax, 5);
    for (double t = 0; t <= ymax; t += ystep) {
        const double py = sy(t);
        svg << "<line x1=\"" << left - 5 << "\" y1=\"" << detail::fixed(py) << "\" x2=\"" << left << "\" y2=\""
            << detail::fixed(py) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << left - 8 << "\" y=\"" << detail::fixed(py + 4) << "\" text-anchor=\"end\">"
            << detail::fixed(t, ystep < 0.1 ? 3 : 2) << "</text>\n";
    }
    svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 10 << "\" text-anchor=\"middle\">x</text>\n";
    svg << "<text x=\"16\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << top + ph / 2 << ")\">density</text>\n";

    svg << "<path fill=\"none\" stroke=\"#b2182b\" stroke-width=\"1.5\" d=\"";
    // Thin to about two samples per pixel.
    const std::size_t stride = std::max<std::size_t>(1, plot.x.size() / static_cast<std::size_t>(2 * pw));
    for (std::size_t i = 0; i < plot.x.size(); i += stride)
        svg << (i ? " L" : "M") << detail::fixed(sx(plot.x[i])) << ',' << detail::fixed(sy(plot.density[i]));
    svg << "\"/>\n</svg>\n";
    return svg.str();
}

} // namespace arnoldqc::io
