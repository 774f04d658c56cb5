#include "bitspectra_cli/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace bitspectra::cli {
namespace {

constexpr double kWidth = 820;
constexpr double kHeight = 600;
constexpr double kLeft = 90;
constexpr double kRight = 190;
constexpr double kTop = 50;
constexpr double kBottom = 70;

const char* kGuideColors[] = {"#444444", "#8c564b", "#e377c2", "#17becf"};

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

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

struct Axis {
  double lo_decade;
  double hi_decade;
  double pixel_lo;
  double pixel_hi;

  double map(double v) const {
    const double t = (std::log10(v) - lo_decade) / (hi_decade - lo_decade);
    return pixel_lo + t * (pixel_hi - pixel_lo);
  }
};

Axis make_axis(double lo, double hi, double pixel_lo, double pixel_hi) {
  double a = std::floor(std::log10(lo));
  double b = std::ceil(std::log10(hi));
  if (b <= a) b = a + 1;
  return {a, b, pixel_lo, pixel_hi};
}

std::string decade_label(int d) {
  if (d >= 0 && d <= 3) return std::to_string(static_cast<int>(std::pow(10, d)));
  return "1e" + std::to_string(d);
}

}  // namespace

PlotPoint clamp_point(double x, double y) {
  if (y > 0.0 && std::isfinite(y)) return {x, y, false};
  return {x, 1.0, true};
}

std::string render_loglog_svg(const ScatterPlot& plot) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = 0;
  double ymin = std::numeric_limits<double>::infinity(), ymax = 0;
  bool any_clamped = false;
  for (const auto& s : plot.series) {
    for (const auto& p : s.points) {
      if (!(p.x > 0)) continue;
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
      any_clamped = any_clamped || p.clamped;
    }
  }
  if (!(xmax > 0)) {
    xmin = 1;
    xmax = 10;
    ymin = 1;
    ymax = 10;
  }
  ymin = std::min(ymin, 1.0);
  const Axis xa = make_axis(xmin, xmax, kLeft, kWidth - kRight);
  const Axis ya = make_axis(ymin, ymax, kHeight - kBottom, kTop);

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << num(kWidth / 2) << "\" y=\"28\" text-anchor=\"middle\" font-size=\"16\">"
      << escape(plot.title) << "</text>\n";

  // Grid and decade ticks.
  svg << "<g stroke=\"#dddddd\" stroke-width=\"1\">\n";
  for (int d = static_cast<int>(xa.lo_decade); d <= static_cast<int>(xa.hi_decade); ++d) {
    const double x = xa.map(std::pow(10.0, d));
    svg << "<line x1=\"" << num(x) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(x)
        << "\" y2=\"" << num(kHeight - kBottom) << "\"/>\n";
  }
  for (int d = static_cast<int>(ya.lo_decade); d <= static_cast<int>(ya.hi_decade); ++d) {
    const double y = ya.map(std::pow(10.0, d));
    svg << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(y) << "\" x2=\""
        << num(kWidth - kRight) << "\" y2=\"" << num(y) << "\"/>\n";
  }
  svg << "</g>\n<g fill=\"#333333\">\n";
  for (int d = static_cast<int>(xa.lo_decade); d <= static_cast<int>(xa.hi_decade); ++d) {
    svg << "<text x=\"" << num(xa.map(std::pow(10.0, d))) << "\" y=\""
        << num(kHeight - kBottom + 18) << "\" text-anchor=\"middle\">" << decade_label(d)
        << "</text>\n";
  }
  for (int d = static_cast<int>(ya.lo_decade); d <= static_cast<int>(ya.hi_decade); ++d) {
    svg << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(ya.map(std::pow(10.0, d)) + 4)
        << "\" text-anchor=\"end\">" << decade_label(d) << "</text>\n";
  }
  svg << "</g>\n";
  svg << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\""
      << num(kWidth - kLeft - kRight) << "\" height=\"" << num(kHeight - kTop - kBottom)
      << "\" fill=\"none\" stroke=\"#333333\"/>\n";
  svg << "<text x=\"" << num((kLeft + kWidth - kRight) / 2) << "\" y=\"" << num(kHeight - 25)
      << "\" text-anchor=\"middle\">" << escape(plot.x_label) << "</text>\n";
  svg << "<text transform=\"translate(25," << num((kTop + kHeight - kBottom) / 2)
      << ") rotate(-90)\" text-anchor=\"middle\">" << escape(plot.y_label) << "</text>\n";

  // Guide lines, clipped to the plot area.
  svg << "<defs><clipPath id=\"plot-area\"><rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop)
      << "\" width=\"" << num(kWidth - kLeft - kRight) << "\" height=\""
      << num(kHeight - kTop - kBottom) << "\"/></clipPath></defs>\n";
  svg << "<g clip-path=\"url(#plot-area)\">\n";
  for (std::size_t g = 0; g < plot.guides.size(); ++g) {
    const auto& guide = plot.guides[g];
    const double x0 = std::pow(10.0, xa.lo_decade);
    const double x1 = std::pow(10.0, xa.hi_decade);
    const double y0 = guide.coefficient * std::pow(x0, guide.exponent);
    const double y1 = guide.coefficient * std::pow(x1, guide.exponent);
    svg << "<line class=\"guide\" x1=\"" << num(xa.map(x0)) << "\" y1=\"" << num(ya.map(y0))
        << "\" x2=\"" << num(xa.map(x1)) << "\" y2=\"" << num(ya.map(y1)) << "\" stroke=\""
        << kGuideColors[g % 4] << "\" stroke-dasharray=\"6,4\" stroke-width=\"1.5\"/>\n";
  }
  for (const auto& s : plot.series) {
    svg << "<g class=\"series\" fill=\"" << s.color << "\" stroke=\"" << s.color << "\">\n";
    for (const auto& p : s.points) {
      if (!(p.x > 0)) continue;
      const double cx = xa.map(p.x);
      const double cy = ya.map(p.y);
      if (p.clamped) {
        svg << "<path class=\"clamped\" d=\"M" << num(cx) << "," << num(cy - 5) << " L"
            << num(cx - 4.5) << "," << num(cy + 3) << " L" << num(cx + 4.5) << ","
            << num(cy + 3) << " Z\" fill=\"none\"/>\n";
      } else {
        svg << "<circle cx=\"" << num(cx) << "\" cy=\"" << num(cy)
            << "\" r=\"2.5\" fill-opacity=\"0.7\" stroke=\"none\"/>\n";
      }
    }
    svg << "</g>\n";
  }
  svg << "</g>\n";

  // Legend.
  double ly = kTop + 10;
  const double lx = kWidth - kRight + 15;
  for (const auto& s : plot.series) {
    svg << "<circle cx=\"" << num(lx) << "\" cy=\"" << num(ly) << "\" r=\"4\" fill=\"" << s.color
        << "\"/><text x=\"" << num(lx + 10) << "\" y=\"" << num(ly + 4) << "\">"
        << escape(s.label) << " (" << s.points.size() << ")</text>\n";
    ly += 18;
  }
  for (std::size_t g = 0; g < plot.guides.size(); ++g) {
    svg << "<line x1=\"" << num(lx - 6) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(lx + 6)
        << "\" y2=\"" << num(ly) << "\" stroke=\"" << kGuideColors[g % 4]
        << "\" stroke-dasharray=\"4,2\"/><text x=\"" << num(lx + 10) << "\" y=\"" << num(ly + 4)
        << "\">" << escape(plot.guides[g].label) << "</text>\n";
    ly += 18;
  }
  if (any_clamped) {
    svg << "<path d=\"M" << num(lx) << "," << num(ly - 5) << " L" << num(lx - 4.5) << ","
        << num(ly + 3) << " L" << num(lx + 4.5) << "," << num(ly + 3)
        << " Z\" fill=\"none\" stroke=\"#333333\"/><text x=\"" << num(lx + 10) << "\" y=\""
        << num(ly + 4) << "\">value &lt;= 0, shown at 1</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace bitspectra::cli
