#include "walshflow/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace walshflow {
namespace {

constexpr double kWidth = 640;
constexpr double kHeight = 420;
constexpr double kLeft = 70;
constexpr double kRight = 150;
constexpr double kTop = 40;
constexpr double kBottom = 50;
const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (const char ch : s) {
    switch (ch) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

std::string svg_line_plot(const PlotSpec& spec, const std::vector<Series>& series) {
  auto tx = [&](double v) { return spec.log_x ? std::log10(v) : v; };
  auto ty = [&](double v) { return spec.log_y ? std::log10(v) : v; };
  auto usable = [&](const std::pair<double, double>& p) {
    return std::isfinite(p.first) && std::isfinite(p.second) && (!spec.log_x || p.first > 0) &&
           (!spec.log_y || p.second > 0);
  };

  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series) {
    for (const auto& p : s.points) {
      if (!usable(p)) continue;
      x0 = std::min(x0, tx(p.first));
      x1 = std::max(x1, tx(p.first));
      y0 = std::min(y0, ty(p.second));
      y1 = std::max(y1, ty(p.second));
    }
  }
  if (!(x0 <= x1)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x0 == x1) x0 -= 0.5, x1 += 0.5;
  if (y0 == y1) y0 -= 0.5, y1 += 0.5;
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto X = [&](double v) { return kLeft + (tx(v) - x0) / (x1 - x0) * pw; };
  auto Y = [&](double v) { return kTop + ph - (ty(v) - y0) / (y1 - y0) * ph; };
  auto untx = [&](double v) { return spec.log_x ? std::pow(10.0, v) : v; };
  auto unty = [&](double v) { return spec.log_y ? std::pow(10.0, v) : v; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << px(kWidth / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(spec.title)
     << "</text>\n";
  os << "<line x1=\"" << px(kLeft) << "\" y1=\"" << px(kTop + ph) << "\" x2=\"" << px(kLeft + pw) << "\" y2=\""
     << px(kTop + ph) << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << px(kLeft) << "\" y1=\"" << px(kTop) << "\" x2=\"" << px(kLeft) << "\" y2=\"" << px(kTop + ph)
     << "\" stroke=\"black\"/>\n";
  for (const double f : {0.0, 0.5, 1.0}) {
    const double xv = untx(x0 + f * (x1 - x0));
    const double yv = unty(y0 + f * (y1 - y0));
    os << "<text x=\"" << px(kLeft + f * pw) << "\" y=\"" << px(kTop + ph + 16) << "\" text-anchor=\"middle\">"
       << fmt(xv) << "</text>\n";
    os << "<text x=\"" << px(kLeft - 6) << "\" y=\"" << px(kTop + ph - f * ph + 4) << "\" text-anchor=\"end\">"
       << fmt(yv) << "</text>\n";
  }
  os << "<text x=\"" << px(kLeft + pw / 2) << "\" y=\"" << px(kHeight - 10) << "\" text-anchor=\"middle\">"
     << escape(spec.x_label) << (spec.log_x ? " (log)" : "") << "</text>\n";
  os << "<text transform=\"translate(16," << px(kTop + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
     << escape(spec.y_label) << (spec.log_y ? " (log)" : "") << "</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = kColors[i % std::size(kColors)];
    std::ostringstream pts;
    for (const auto& p : series[i].points) {
      if (usable(p)) pts << px(X(p.first)) << "," << px(Y(p.second)) << " ";
    }
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"" << pts.str() << "\"/>\n";
    if (series[i].points.size() <= 50) {
      for (const auto& p : series[i].points) {
        if (!usable(p)) continue;
        os << "<circle cx=\"" << px(X(p.first)) << "\" cy=\"" << px(Y(p.second)) << "\" r=\"3\" fill=\"" << color
           << "\"/>\n";
      }
    }
    const double ly = kTop + 14 + 18 * static_cast<double>(i);
    os << "<line x1=\"" << px(kLeft + pw + 12) << "\" y1=\"" << px(ly - 4) << "\" x2=\"" << px(kLeft + pw + 32)
       << "\" y2=\"" << px(ly - 4) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << px(kLeft + pw + 38) << "\" y=\"" << px(ly) << "\">" << escape(series[i].label)
       << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace walshflow
