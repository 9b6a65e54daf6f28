#include "svg.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace mixate::cli {

namespace {

constexpr double kWidth = 640, kHeight = 400, kMargin = 50;
constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string line_chart_svg(const std::vector<Series>& series,
                           const std::string& title, const std::string& xlabel,
                           const std::string& ylabel) {
  double xmax = 0.0, ymax = 0.0;
  for (const auto& s : series) {
    for (double v : s.x) xmax = std::max(xmax, v);
    for (double v : s.y) ymax = std::max(ymax, v);
  }
  if (xmax <= 0.0) xmax = 1.0;
  if (ymax <= 0.0) ymax = 1.0;
  const double pw = kWidth - 2 * kMargin, ph = kHeight - 2 * kMargin;
  auto px = [&](double x) { return kMargin + pw * x / xmax; };
  auto py = [&](double y) { return kHeight - kMargin - ph * y / ymax; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
    << "\" height=\"" << kHeight << "\" font-family=\"sans-serif\" "
    << "font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\">"
    << escape(title) << "</text>\n";
  o << "<line x1=\"" << kMargin << "\" y1=\"" << kHeight - kMargin
    << "\" x2=\"" << kWidth - kMargin << "\" y2=\"" << kHeight - kMargin
    << "\" stroke=\"black\"/>\n";
  o << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\""
    << kMargin << "\" y2=\"" << kHeight - kMargin << "\" stroke=\"black\"/>\n";
  o << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 10
    << "\" text-anchor=\"middle\">" << escape(xlabel) << "</text>\n";
  o << "<text x=\"15\" y=\"" << kHeight / 2 << "\" transform=\"rotate(-90 15 "
    << kHeight / 2 << ")\" text-anchor=\"middle\">" << escape(ylabel)
    << "</text>\n";
  o << "<text x=\"" << kMargin - 5 << "\" y=\"" << kMargin + 4
    << "\" text-anchor=\"end\">" << num(ymax) << "</text>\n";
  o << "<text x=\"" << kWidth - kMargin << "\" y=\"" << kHeight - kMargin + 15
    << "\" text-anchor=\"middle\">" << num(xmax) << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kColors[k % std::size(kColors)];
    o << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      o << num(px(s.x[i])) << ',' << num(py(s.y[i])) << ' ';
    }
    o << "\"/>\n";
    if (!s.label.empty()) {
      o << "<text x=\"" << kWidth - kMargin - 5 << "\" y=\""
        << kMargin + 15 * (k + 1) << "\" text-anchor=\"end\" fill=\"" << color
        << "\">" << escape(s.label) << "</text>\n";
    }
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace mixate::cli
