#pragma once

#include <string>
#include <vector>

namespace bitspectra::cli {

struct PlotPoint {
  double x = 0.0;
  double y = 0.0;
  // The original value was <= 0 and is drawn at y = 1.
  bool clamped = false;
};

struct PlotSeries {
  std::string label;
  std::string color;
  std::vector<PlotPoint> points;
};

// y = coefficient * x^exponent, drawn dashed across the x range.
struct GuideLine {
  std::string label;
  double coefficient = 1.0;
  double exponent = 1.0;
};

struct ScatterPlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
  std::vector<GuideLine> guides;
};

// Self-contained SVG document with log-log axes, decade ticks and a legend.
std::string render_loglog_svg(const ScatterPlot& plot);

// Replaces values <= 0 by 1 and marks them.
PlotPoint clamp_point(double x, double y);

}  // namespace bitspectra::cli
