#include "oqsim/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <vector>

namespace oqsim {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
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

double nice_step(double range) {
  const double raw = range / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  const double nice = norm < 1.5 ? 1.0 : norm < 3.0 ? 2.0 : norm < 7.0 ? 5.0 : 10.0;
  return nice * mag;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (!(lo <= hi)) {
      lo = 0.0;
      hi = 1.0;
    }
    if (hi - lo < 1e-12) {
      lo -= 0.5;
      hi += 0.5;
    }
  }
};

}  // namespace

std::string render_svg(std::span<const TimeSeries> theory, std::span<const TimeSeries> simulated,
                       const PlotStyle& style) {
  std::vector<std::string> labels;
  auto color_of = [&](const std::string& label) {
    auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) {
      labels.push_back(label);
      it = labels.end() - 1;
    }
    return std::string(kPalette[static_cast<std::size_t>(it - labels.begin()) % std::size(kPalette)]);
  };
  for (const auto& s : theory) color_of(s.label);
  for (const auto& s : simulated) color_of(s.label);

  Range xr, yr;
  for (auto series : {theory, simulated})
    for (const auto& s : series) {
      for (double t : s.times) xr.add(t);
      for (double v : s.values) yr.add(v);
    }
  xr.finish();
  yr.finish();
  const double ypad = 0.05 * (yr.hi - yr.lo);
  yr.lo -= ypad;
  yr.hi += ypad;

  const double left = 70.0, right = 180.0, top = 40.0, bottom = 55.0;
  const double pw = style.width - left - right;
  const double ph = style.height - top - bottom;
  auto px = [&](double x) { return left + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto py = [&](double y) { return top + (yr.hi - y) / (yr.hi - yr.lo) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << style.width << "\" height=\"" << style.height
     << "\" viewBox=\"0 0 " << style.width << ' ' << style.height << "\" font-family=\"sans-serif\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!style.title.empty())
    os << "<text x=\"" << fmt("%.2f", left + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
       << escape(style.title) << "</text>\n";
  os << "<rect x=\"" << fmt("%.2f", left) << "\" y=\"" << fmt("%.2f", top) << "\" width=\"" << fmt("%.2f", pw)
     << "\" height=\"" << fmt("%.2f", ph) << "\" fill=\"none\" stroke=\"black\"/>\n";

  const double xstep = nice_step(xr.hi - xr.lo);
  for (double x = std::ceil(xr.lo / xstep) * xstep; x <= xr.hi + 1e-9 * xstep; x += xstep) {
    const double xv = std::abs(x) < 1e-12 * xstep ? 0.0 : x;
    os << "<line x1=\"" << fmt("%.2f", px(xv)) << "\" y1=\"" << fmt("%.2f", top + ph) << "\" x2=\""
       << fmt("%.2f", px(xv)) << "\" y2=\"" << fmt("%.2f", top + ph + 5) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << fmt("%.2f", px(xv)) << "\" y=\"" << fmt("%.2f", top + ph + 19)
       << "\" text-anchor=\"middle\" font-size=\"11\">" << fmt("%.4g", xv) << "</text>\n";
  }
  const double ystep = nice_step(yr.hi - yr.lo);
  for (double y = std::ceil(yr.lo / ystep) * ystep; y <= yr.hi + 1e-9 * ystep; y += ystep) {
    const double yv = std::abs(y) < 1e-12 * ystep ? 0.0 : y;
    os << "<line x1=\"" << fmt("%.2f", left - 5) << "\" y1=\"" << fmt("%.2f", py(yv)) << "\" x2=\""
       << fmt("%.2f", left) << "\" y2=\"" << fmt("%.2f", py(yv)) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << fmt("%.2f", left - 8) << "\" y=\"" << fmt("%.2f", py(yv) + 4)
       << "\" text-anchor=\"end\" font-size=\"11\">" << fmt("%.4g", yv) << "</text>\n";
  }
  os << "<text x=\"" << fmt("%.2f", left + pw / 2) << "\" y=\"" << fmt("%.2f", style.height - 12.0)
     << "\" text-anchor=\"middle\" font-size=\"13\">" << escape(style.x_label) << "</text>\n";
  os << "<text x=\"18\" y=\"" << fmt("%.2f", top + ph / 2) << "\" text-anchor=\"middle\" font-size=\"13\" "
     << "transform=\"rotate(-90 18 " << fmt("%.2f", top + ph / 2) << ")\">" << escape(style.y_label) << "</text>\n";

  for (const auto& s : theory) {
    os << "<polyline fill=\"none\" stroke=\"" << color_of(s.label) << "\" stroke-width=\"1.5\" "
       << "stroke-dasharray=\"6 4\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < s.times.size(); ++i) {
      if (!std::isfinite(s.values[i])) continue;
      os << (first ? "" : " ") << fmt("%.2f", px(s.times[i])) << ',' << fmt("%.2f", py(s.values[i]));
      first = false;
    }
    os << "\"/>\n";
  }
  for (const auto& s : simulated) {
    const std::string color = color_of(s.label);
    for (std::size_t i = 0; i < s.times.size(); ++i) {
      if (!std::isfinite(s.values[i])) continue;
      os << "<circle cx=\"" << fmt("%.2f", px(s.times[i])) << "\" cy=\"" << fmt("%.2f", py(s.values[i]))
         << "\" r=\"3.5\" fill=\"" << color << "\"/>\n";
    }
  }

  double ly = top + 12.0;
  const double lx = left + pw + 16.0;
  for (const auto& label : labels) {
    const std::string color = color_of(label);
    const bool has_theory = std::any_of(theory.begin(), theory.end(), [&](const auto& s) { return s.label == label; });
    const bool has_sim = std::any_of(simulated.begin(), simulated.end(), [&](const auto& s) { return s.label == label; });
    if (has_theory)
      os << "<line x1=\"" << fmt("%.2f", lx) << "\" y1=\"" << fmt("%.2f", ly) << "\" x2=\"" << fmt("%.2f", lx + 24)
         << "\" y2=\"" << fmt("%.2f", ly) << "\" stroke=\"" << color << "\" stroke-width=\"1.5\" "
         << "stroke-dasharray=\"6 4\"/>\n";
    if (has_sim)
      os << "<circle cx=\"" << fmt("%.2f", lx + 12) << "\" cy=\"" << fmt("%.2f", ly) << "\" r=\"3.5\" fill=\""
         << color << "\"/>\n";
    os << "<text x=\"" << fmt("%.2f", lx + 30) << "\" y=\"" << fmt("%.2f", ly + 4) << "\" font-size=\"11\">"
       << escape(label) << "</text>\n";
    ly += 18.0;
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace oqsim
