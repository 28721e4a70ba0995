#pragma once

#include <string>

#include "ncc/local_projection.hpp"

namespace ncc {

struct PlotStyle {
    int width = 640;
    int height = 400;
    int margin = 56;
    std::string line_color = "#1f4e79";
    std::string band_color = "#9dc3e6";
    double band_opacity = 0.45;
    std::string title;  // defaults to "Impulse response of <dep_var>"
};

// Standalone SVG: beta_h over h, shaded confidence band, dashed zero line.
// The plotted numbers are embedded verbatim as CSV inside <metadata>.
std::string render_irf_plot(const IrfResult& result, const PlotStyle& style = {});

}  // namespace ncc
