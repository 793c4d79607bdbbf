// Copyright 2026 The segmap Authors
// SPDX-License-Identifier: Apache-2.0

#include "segmap/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "segmap/graph.hpp"

namespace segmap {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace

std::string line_plot_svg(const std::vector<std::pair<std::string, YearSeries>>& series, const PlotOptions& opt) {
  const double left = 64, right = 16, top = 36, bottom = 44;
  const double pw = opt.width - left - right, ph = opt.height - top - bottom;
  int x0 = std::numeric_limits<int>::max(), x1 = std::numeric_limits<int>::min();
  double y0 = 0, y1 = 0;
  bool any = false;
  for (const auto& [name, s] : series) {
    for (const auto& [x, y] : s.points()) {
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = any ? std::min(y0, y) : std::min(0.0, y);
      y1 = any ? std::max(y1, y) : y;
      any = true;
    }
  }
  if (!any) {
    x0 = 0;
    x1 = 1;
  }
  if (x1 == x0) ++x1;
  if (y1 <= y0) y1 = y0 + 1;
  auto sx = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  auto sy = [&](double y) { return top + ph - (y - y0) / (y1 - y0) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width << "\" height=\"" << opt.height
     << "\" font-family=\"sans-serif\" font-size=\"11\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!opt.title.empty()) {
    os << "<text x=\"" << fmt(opt.width / 2.0) << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
       << xml_escape(opt.title) << "</text>\n";
  }
  os << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(top + ph) << "\" x2=\"" << fmt(left + pw) << "\" y2=\""
     << fmt(top + ph) << "\" stroke=\"black\"/>\n"
     << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(top) << "\" x2=\"" << fmt(left) << "\" y2=\"" << fmt(top + ph)
     << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    double xv = x0 + (x1 - x0) * i / 4.0;
    double yv = y0 + (y1 - y0) * i / 4.0;
    os << "<text x=\"" << fmt(sx(xv)) << "\" y=\"" << fmt(top + ph + 16) << "\" text-anchor=\"middle\">"
       << static_cast<int>(std::lround(xv)) << "</text>\n"
       << "<text x=\"" << fmt(left - 6) << "\" y=\"" << fmt(sy(yv) + 4) << "\" text-anchor=\"end\">" << tick(yv)
       << "</text>\n";
  }
  if (!opt.y_label.empty()) {
    os << "<text transform=\"translate(14," << fmt(top + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
       << xml_escape(opt.y_label) << "</text>\n";
  }
  std::size_t k = 0;
  for (const auto& [name, s] : series) {
    const char* color = kPalette[k % std::size(kPalette)];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.points().size(); ++i) {
      if (i) os << ' ';
      os << fmt(sx(s.points()[i].first)) << ',' << fmt(sy(s.points()[i].second));
    }
    os << "\"/>\n";
    os << "<text x=\"" << fmt(left + 8) << "\" y=\"" << fmt(top + 12 + 14.0 * k) << "\" fill=\"" << color << "\">"
       << xml_escape(name) << "</text>\n";
    ++k;
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace segmap
