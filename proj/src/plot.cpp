#include "ncc/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "ncc/csv.hpp"
#include "ncc/errors.hpp"

namespace ncc {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string escape(const std::string& s) {
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

}  // namespace

std::string render_irf_plot(const IrfResult& result, const PlotStyle& style) {
    const auto& hs = result.horizons;
    if (hs.empty()) throw DomainError("cannot plot an empty impulse response");

    double y_lo = 0.0, y_hi = 0.0;
    for (const auto& e : hs) {
        y_lo = std::min({y_lo, e.ci_lo, e.beta});
        y_hi = std::max({y_hi, e.ci_hi, e.beta});
    }
    if (y_hi - y_lo <= 0.0) {
        y_lo -= 1.0;
        y_hi += 1.0;
    }
    const double pad = 0.05 * (y_hi - y_lo);
    y_lo -= pad;
    y_hi += pad;
    const int h_min = hs.front().horizon;
    const int h_max = hs.back().horizon;

    const double left = style.margin, right = style.width - style.margin / 2.0;
    const double top = style.margin / 2.0 + 12.0, bottom = style.height - style.margin;
    auto px = [&](double h) {
        if (h_max == h_min) return 0.5 * (left + right);
        return left + (h - h_min) / (h_max - h_min) * (right - left);
    };
    auto py = [&](double y) { return bottom - (y - y_lo) / (y_hi - y_lo) * (bottom - top); };

    const std::string title =
        style.title.empty() ? "Impulse response of " + result.dep_var : style.title;

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << style.width << "\" height=\""
       << style.height << "\" viewBox=\"0 0 " << style.width << ' ' << style.height << "\">\n";
    os << "<metadata id=\"irf-data\"><![CDATA[\n";
    os << "horizon,beta,ci_lo,ci_hi\n";
    for (const auto& e : hs)
        os << e.horizon << ',' << csv::fmt(e.beta) << ',' << csv::fmt(e.ci_lo) << ','
           << csv::fmt(e.ci_hi) << '\n';
    os << "]]></metadata>\n";
    os << "<title>" << escape(title) << "</title>\n";
    os << "<rect x=\"0\" y=\"0\" width=\"" << style.width << "\" height=\"" << style.height
       << "\" fill=\"white\"/>\n";

    // band
    os << "<polygon id=\"band\" fill=\"" << style.band_color << "\" fill-opacity=\""
       << num(style.band_opacity) << "\" stroke=\"none\" points=\"";
    if (hs.size() == 1) {
        const double x = px(hs[0].horizon);
        os << num(x - 6) << ',' << num(py(hs[0].ci_hi)) << ' ' << num(x + 6) << ','
           << num(py(hs[0].ci_hi)) << ' ' << num(x + 6) << ',' << num(py(hs[0].ci_lo)) << ' '
           << num(x - 6) << ',' << num(py(hs[0].ci_lo));
    } else {
        for (const auto& e : hs) os << num(px(e.horizon)) << ',' << num(py(e.ci_hi)) << ' ';
        for (auto it = hs.rbegin(); it != hs.rend(); ++it) {
            os << num(px(it->horizon)) << ',' << num(py(it->ci_lo));
            if (std::next(it) != hs.rend()) os << ' ';
        }
    }
    os << "\"/>\n";

    os << "<line id=\"zero\" x1=\"" << num(left) << "\" y1=\"" << num(py(0.0)) << "\" x2=\""
       << num(right) << "\" y2=\"" << num(py(0.0))
       << "\" stroke=\"#555555\" stroke-width=\"1\" stroke-dasharray=\"4 3\"/>\n";

    if (hs.size() > 1) {
        os << "<polyline id=\"irf\" fill=\"none\" stroke=\"" << style.line_color
           << "\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < hs.size(); ++i) {
            if (i) os << ' ';
            os << num(px(hs[i].horizon)) << ',' << num(py(hs[i].beta));
        }
        os << "\"/>\n";
    }
    for (const auto& e : hs)
        os << "<circle class=\"marker\" cx=\"" << num(px(e.horizon)) << "\" cy=\"" << num(py(e.beta))
           << "\" r=\"3\" fill=\"" << style.line_color << "\"/>\n";

    // axes and ticks
    os << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#222222\">\n";
    os << "<line x1=\"" << num(left) << "\" y1=\"" << num(bottom) << "\" x2=\"" << num(right)
       << "\" y2=\"" << num(bottom) << "\" stroke=\"#222222\"/>\n";
    os << "<line x1=\"" << num(left) << "\" y1=\"" << num(top) << "\" x2=\"" << num(left)
       << "\" y2=\"" << num(bottom) << "\" stroke=\"#222222\"/>\n";
    for (const auto& e : hs)
        os << "<text x=\"" << num(px(e.horizon)) << "\" y=\"" << num(bottom + 16)
           << "\" text-anchor=\"middle\">" << e.horizon << "</text>\n";
    for (int i = 0; i <= 4; ++i) {
        const double v = y_lo + (y_hi - y_lo) * i / 4.0;
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3g", v);
        os << "<text x=\"" << num(left - 6) << "\" y=\"" << num(py(v) + 4)
           << "\" text-anchor=\"end\">" << buf << "</text>\n";
    }
    os << "<text x=\"" << num(0.5 * (left + right)) << "\" y=\"" << num(style.height - 14.0)
       << "\" text-anchor=\"middle\">horizon (quarters)</text>\n";
    os << "<text x=\"" << num(0.5 * (left + right)) << "\" y=\"18\" text-anchor=\"middle\" "
          "font-size=\"14\">"
       << escape(title) << "</text>\n";
    os << "</g>\n</svg>\n";
    return os.str();
}

}  // namespace ncc
