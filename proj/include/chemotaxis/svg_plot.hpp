#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace chemotaxis::svg {

struct Curve {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotOptions {
  std::string title;
  std::string x_label = "t";
  std::string y_label = "max u";
  bool log_y = true;
  int width = 720;
  int height = 460;
};

inline std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

namespace detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace detail

/// Standalone SVG line chart (no scripts, fonts or external references).
inline std::string line_plot(const std::vector<Curve>& curves, const PlotOptions& opt = {}) {
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  const double left = 80, right = 170, top = 40, bottom = 60;
  const double pw = opt.width - left - right, ph = opt.height - top - bottom;

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& c : curves)
    for (std::size_t i = 0; i < c.x.size() && i < c.y.size(); ++i) {
      if (opt.log_y && !(c.y[i] > 0.0)) continue;
      xmin = std::min(xmin, c.x[i]);
      xmax = std::max(xmax, c.x[i]);
      ymin = std::min(ymin, c.y[i]);
      ymax = std::max(ymax, c.y[i]);
    }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 1, ymax = 10;
  if (xmax <= xmin) xmax = xmin + 1.0;
  auto ty = [&](double y) { return opt.log_y ? std::log10(y) : y; };
  double y0 = ty(ymin), y1 = ty(ymax);
  if (opt.log_y) {
    y0 = std::floor(y0);
    y1 = std::ceil(y1);
  }
  if (y1 <= y0) y1 = y0 + 1.0;
  auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return top + ph - (ty(y) - y0) / (y1 - y0) * ph; };

  std::ostringstream os;
  using detail::num;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width << "\" height=\"" << opt.height
     << "\" viewBox=\"0 0 " << opt.width << ' ' << opt.height << "\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << opt.width << "\" height=\"" << opt.height << "\" fill=\"white\"/>\n";
  if (!opt.title.empty())
    os << "<text x=\"" << num(left + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
       << escape(opt.title) << "</text>\n";
  os << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(pw) << "\" height=\"" << num(ph)
     << "\" fill=\"none\" stroke=\"black\"/>\n";

  // Vertical axis: decades when logarithmic, five intervals otherwise.
  const int yticks = opt.log_y ? static_cast<int>(y1 - y0) : 5;
  for (int i = 0; i <= yticks; ++i) {
    const double e = y0 + (y1 - y0) * i / yticks;
    const double yv = opt.log_y ? std::pow(10.0, e) : e;
    const double yp = py(yv);
    os << "<line x1=\"" << num(left - 5) << "\" y1=\"" << num(yp) << "\" x2=\"" << num(left + pw) << "\" y2=\""
       << num(yp) << "\" stroke=\"#dddddd\"/>\n";
    os << "<text x=\"" << num(left - 8) << "\" y=\"" << num(yp + 4) << "\" text-anchor=\"end\" font-size=\"11\">"
       << escape(opt.log_y ? "1e" + std::to_string(static_cast<int>(std::lround(e))) : detail::tick_label(yv))
       << "</text>\n";
  }
  for (int i = 0; i <= 5; ++i) {
    const double xv = xmin + (xmax - xmin) * i / 5.0;
    os << "<line x1=\"" << num(px(xv)) << "\" y1=\"" << num(top + ph) << "\" x2=\"" << num(px(xv)) << "\" y2=\""
       << num(top + ph + 5) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << num(px(xv)) << "\" y=\"" << num(top + ph + 20) << "\" text-anchor=\"middle\" font-size=\"11\">"
       << escape(detail::tick_label(xv)) << "</text>\n";
  }
  os << "<text x=\"" << num(left + pw / 2) << "\" y=\"" << num(opt.height - 15)
     << "\" text-anchor=\"middle\" font-size=\"13\">" << escape(opt.x_label) << "</text>\n";
  os << "<text x=\"18\" y=\"" << num(top + ph / 2) << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 "
     << num(top + ph / 2) << ")\">" << escape(opt.y_label) << "</text>\n";

  for (std::size_t k = 0; k < curves.size(); ++k) {
    const auto& c = curves[k];
    const char* color = palette[k % 10];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < c.x.size() && i < c.y.size(); ++i) {
      if (opt.log_y && !(c.y[i] > 0.0)) continue;
      os << (first ? "" : " ") << num(px(c.x[i])) << ',' << num(py(c.y[i]));
      first = false;
    }
    os << "\"/>\n";
    const double ly = top + 14 + 18.0 * k;
    os << "<line x1=\"" << num(left + pw + 12) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(left + pw + 36)
       << "\" y2=\"" << num(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << num(left + pw + 42) << "\" y=\"" << num(ly + 4) << "\" font-size=\"11\">" << escape(c.label)
       << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace chemotaxis::svg
