#pragma once

#include <span>
#include <string>

#include "oqsim/analysis.hpp"

namespace oqsim {

struct PlotStyle {
  std::string title;
  std::string x_label = "t";
  std::string y_label = "value";
  int width = 720;
  int height = 480;
};

/// Deterministic SVG: theory series as dashed lines, simulated series as
/// markers. Series sharing a label share a color.
std::string render_svg(std::span<const TimeSeries> theory, std::span<const TimeSeries> simulated,
                       const PlotStyle& style);

}  // namespace oqsim
