#include "jitstar/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

namespace jitstar
{

namespace
{

constexpr double kW = 860.0, kH = 640.0;
constexpr double kLeft = 70.0, kRight = 820.0;
constexpr double kCostTop = 40.0, kCostBottom = 360.0;
constexpr double kSuccTop = 430.0, kSuccBottom = 600.0;

const char *kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string fmt(double v)
{
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string escapeXml(const std::string &s)
{
    std::string out;
    out.reserve(s.size());
    for (char c : s)
    {
        switch (c)
        {
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

void axis(std::ostringstream &svg, double x0, double y0, double x1, double y1)
{
    svg << "<line x1=\"" << fmt(x0) << "\" y1=\"" << fmt(y0) << "\" x2=\"" << fmt(x1) << "\" y2=\""
        << fmt(y1) << "\" stroke=\"#333\" stroke-width=\"1\"/>\n";
}

void text(std::ostringstream &svg, double x, double y, const std::string &s, const char *anchor = "middle",
          const char *fill = "#333")
{
    svg << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" font-family=\"sans-serif\" font-size=\"12\""
        << " text-anchor=\"" << anchor << "\" fill=\"" << fill << "\">" << s << "</text>\n";
}

}  // namespace

void emitPlot(const Summary &summary, const std::string &path)
{
    const double maxTime = summary.maxTime > 0.0 ? summary.maxTime : 1.0;

    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const PlannerSummary &ps : summary.planners)
        for (const QuantileBand &b : ps.bands)
            for (double v : {b.q25, b.q50, b.q75})
                if (std::isfinite(v))
                {
                    lo = std::min(lo, v);
                    hi = std::max(hi, v);
                }
    if (!std::isfinite(lo))
    {
        lo = 0.0;
        hi = 1.0;
    }
    if (hi - lo < 1e-12)
    {
        lo -= 0.5;
        hi += 0.5;
    }
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;

    const auto sx = [&](double t) { return kLeft + (t / maxTime) * (kRight - kLeft); };
    const auto syCost = [&](double c) { return kCostBottom - (c - lo) / (hi - lo) * (kCostBottom - kCostTop); };
    const auto sySucc = [&](double s) { return kSuccBottom - s * (kSuccBottom - kSuccTop); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(kW) << "\" height=\"" << fmt(kH)
        << "\" viewBox=\"0 0 " << fmt(kW) << " " << fmt(kH) << "\">\n";
    svg << "<rect width=\"" << fmt(kW) << "\" height=\"" << fmt(kH) << "\" fill=\"white\"/>\n";

    axis(svg, kLeft, kCostBottom, kRight, kCostBottom);
    axis(svg, kLeft, kCostTop, kLeft, kCostBottom);
    axis(svg, kLeft, kSuccBottom, kRight, kSuccBottom);
    axis(svg, kLeft, kSuccTop, kLeft, kSuccBottom);

    for (int k = 0; k <= 4; ++k)
    {
        const double t = maxTime * k / 4.0;
        text(svg, sx(t), kCostBottom + 16.0, fmt(t));
        text(svg, sx(t), kSuccBottom + 16.0, fmt(t));
        const double c = lo + (hi - lo) * k / 4.0;
        text(svg, kLeft - 8.0, syCost(c) + 4.0, fmt(c), "end");
        const double s = k / 4.0;
        text(svg, kLeft - 8.0, sySucc(s) + 4.0, fmt(s), "end");
    }
    text(svg, (kLeft + kRight) / 2.0, kCostBottom + 34.0, "time [s]");
    text(svg, (kLeft + kRight) / 2.0, kSuccBottom + 34.0, "time [s]");
    text(svg, kLeft, kCostTop - 12.0, "path cost (median, 25-75% band)", "start");
    text(svg, kLeft, kSuccTop - 12.0, "success rate", "start");

    std::size_t idx = 0;
    for (const PlannerSummary &ps : summary.planners)
    {
        const char *color = kPalette[idx % (sizeof(kPalette) / sizeof(kPalette[0]))];

        // 25-75% band over maximal runs of bins where both quantiles exist.
        std::size_t i = 0;
        while (i < ps.bands.size())
        {
            while (i < ps.bands.size() && !(std::isfinite(ps.bands[i].q25) && std::isfinite(ps.bands[i].q75)))
                ++i;
            std::size_t j = i;
            while (j < ps.bands.size() && std::isfinite(ps.bands[j].q25) && std::isfinite(ps.bands[j].q75))
                ++j;
            if (j > i + 1)
            {
                svg << "<path d=\"M";
                for (std::size_t k = i; k < j; ++k)
                    svg << ' ' << fmt(sx(ps.bands[k].t)) << ',' << fmt(syCost(ps.bands[k].q75));
                for (std::size_t k = j; k-- > i;)
                    svg << " L " << fmt(sx(ps.bands[k].t)) << ',' << fmt(syCost(ps.bands[k].q25));
                svg << " Z\" fill=\"" << color << "\" fill-opacity=\"0.2\" stroke=\"none\"/>\n";
            }
            i = j;
        }

        // Median curve, split at gaps.
        i = 0;
        while (i < ps.bands.size())
        {
            while (i < ps.bands.size() && !std::isfinite(ps.bands[i].q50))
                ++i;
            std::size_t j = i;
            while (j < ps.bands.size() && std::isfinite(ps.bands[j].q50))
                ++j;
            if (j > i)
            {
                svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
                for (std::size_t k = i; k < j; ++k)
                    svg << fmt(sx(ps.bands[k].t)) << ',' << fmt(syCost(ps.bands[k].q50)) << ' ';
                svg << "\"/>\n";
            }
            i = j;
        }

        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (const QuantileBand &b : ps.bands)
            svg << fmt(sx(b.t)) << ',' << fmt(sySucc(b.successRate)) << ' ';
        svg << "\"/>\n";

        const double ly = kCostTop + 16.0 + 18.0 * static_cast<double>(idx);
        svg << "<line x1=\"" << fmt(kRight - 150.0) << "\" y1=\"" << fmt(ly - 4.0) << "\" x2=\""
            << fmt(kRight - 120.0) << "\" y2=\"" << fmt(ly - 4.0) << "\" stroke=\"" << color
            << "\" stroke-width=\"3\"/>\n";
        text(svg, kRight - 112.0, ly, escapeXml(ps.planner), "start");
        ++idx;
    }
    svg << "</svg>\n";

    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ConfigurationError("emitPlot: cannot open " + path);
    out << svg.str();
    if (!out)
        throw ConfigurationError("emitPlot: failed writing " + path);
}

}  // namespace jitstar
