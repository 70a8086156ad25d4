#include "lot/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "lot/io.hpp"

namespace lot {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

std::string svg_scatter(const std::vector<std::array<double, 2>>& points, const std::vector<int>& labels,
                        const std::string& title) {
  constexpr double kW = 480, kH = 360, kPad = 40;
  double x0 = -1, x1 = 1, y0 = -1, y1 = 1;
  if (!points.empty()) {
    x0 = x1 = points[0][0];
    y0 = y1 = points[0][1];
    for (const auto& p : points) {
      x0 = std::min(x0, p[0]);
      x1 = std::max(x1, p[0]);
      y0 = std::min(y0, p[1]);
      y1 = std::max(y1, p[1]);
    }
    if (x1 == x0) { x0 -= 1; x1 += 1; }
    if (y1 == y0) { y0 -= 1; y1 += 1; }
  }
  auto sx = [&](double x) { return kPad + (x - x0) / (x1 - x0) * (kW - 2 * kPad); };
  auto sy = [&](double y) { return kH - kPad - (y - y0) / (y1 - y0) * (kH - 2 * kPad); };

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\" viewBox=\"0 0 "
      << kW << ' ' << kH << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty()) {
    out << "<text x=\"" << kW / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
  }
  out << "<g class=\"axes\" stroke=\"black\" stroke-width=\"1\">\n"
      << "<line x1=\"" << kPad << "\" y1=\"" << kH - kPad << "\" x2=\"" << kW - kPad << "\" y2=\"" << kH - kPad
      << "\"/>\n"
      << "<line x1=\"" << kPad << "\" y1=\"" << kPad << "\" x2=\"" << kPad << "\" y2=\"" << kH - kPad << "\"/>\n"
      << "</g>\n"
      << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 8 << "\" text-anchor=\"middle\" font-size=\"11\">LDA axis 1</text>\n"
      << "<text x=\"12\" y=\"" << kH / 2 << "\" font-size=\"11\" transform=\"rotate(-90 12 " << kH / 2
      << ")\" text-anchor=\"middle\">LDA axis 2</text>\n";
  out << "<g class=\"points\">\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double px = sx(points[i][0]);
    const double py = sy(points[i][1]);
    const bool pos = i < labels.size() && labels[i] > 0;
    if (pos) {
      out << "<circle class=\"pt pos\" cx=\"" << fmt(px) << "\" cy=\"" << fmt(py)
          << "\" r=\"3\" fill=\"none\" stroke=\"#1f4e9c\"/>\n";
    } else {
      out << "<rect class=\"pt neg\" x=\"" << fmt(px - 3) << "\" y=\"" << fmt(py - 3)
          << "\" width=\"6\" height=\"6\" fill=\"none\" stroke=\"#c0392b\"/>\n";
    }
  }
  out << "</g>\n"
      << "<g class=\"legend\" font-size=\"11\">\n"
      << "<circle cx=\"" << kW - 110 << "\" cy=\"" << kPad << "\" r=\"3\" fill=\"none\" stroke=\"#1f4e9c\"/>\n"
      << "<text x=\"" << kW - 100 << "\" y=\"" << kPad + 4 << "\">class +1</text>\n"
      << "<rect x=\"" << kW - 113 << "\" y=\"" << kPad + 13 << "\" width=\"6\" height=\"6\" fill=\"none\" stroke=\"#c0392b\"/>\n"
      << "<text x=\"" << kW - 100 << "\" y=\"" << kPad + 20 << "\">class -1</text>\n"
      << "</g>\n</svg>\n";
  return out.str();
}

void emit_svg_scatter(const std::vector<std::array<double, 2>>& points, const std::vector<int>& labels,
                      const std::string& path, const std::string& title) {
  write_text(path, svg_scatter(points, labels, title));
}

}  // namespace lot
