#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <stdexcept>

namespace cli {

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

}  // namespace

void write_svg(const std::string& path, const Plot& plot) {
  constexpr double w = 640, h = 480, margin = 50;
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto* set : {&plot.points, &plot.markers, &plot.outline})
    for (const auto& p : *set) {
      x0 = std::min(x0, p.x());
      x1 = std::max(x1, p.x());
      y0 = std::min(y0, p.y());
      y1 = std::max(y1, p.y());
    }
  if (!std::isfinite(x0)) x0 = y0 = -1, x1 = y1 = 1;
  // pad degenerate ranges
  if (x1 - x0 < 1e-12) x0 -= 0.5, x1 += 0.5;
  if (y1 - y0 < 1e-12) y0 -= 0.5, y1 += 0.5;
  const double px = 0.05 * (x1 - x0), py = 0.05 * (y1 - y0);
  x0 -= px, x1 += px, y0 -= py, y1 += py;
  auto sx = [&](double x) { return margin + (x - x0) / (x1 - x0) * (w - 2 * margin); };
  auto sy = [&](double y) { return h - margin - (y - y0) / (y1 - y0) * (h - 2 * margin); };

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << std::setprecision(6);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
      << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << w - 2 * margin
      << "\" height=\"" << h - 2 * margin << "\" fill=\"none\" stroke=\"black\"/>\n";
  out << "<text x=\"" << w / 2 << "\" y=\"25\" text-anchor=\"middle\" font-size=\"16\">"
      << escape(plot.title) << "</text>\n";
  out << "<text x=\"" << w / 2 << "\" y=\"" << h - 12 << "\" text-anchor=\"middle\" font-size=\"12\">"
      << escape(plot.x_label) << " [" << x0 + px << ", " << x1 - px << "]</text>\n";
  out << "<text x=\"14\" y=\"" << h / 2 << "\" transform=\"rotate(-90 14 " << h / 2
      << ")\" text-anchor=\"middle\" font-size=\"12\">" << escape(plot.y_label) << " ["
      << y0 + py << ", " << y1 - py << "]</text>\n";
  out << "<g fill=\"#888\" fill-opacity=\"0.5\">\n";
  for (const auto& p : plot.points)
    out << "<circle cx=\"" << sx(p.x()) << "\" cy=\"" << sy(p.y()) << "\" r=\"1.2\"/>\n";
  out << "</g>\n";
  if (!plot.outline.empty()) {
    out << "<" << (plot.close_outline ? "polygon" : "polyline")
        << " fill=\"none\" stroke=\"#1f4fbf\" stroke-width=\"1.5\" points=\"";
    for (const auto& p : plot.outline) out << sx(p.x()) << ',' << sy(p.y()) << ' ';
    out << "\"/>\n";
  }
  out << "<g fill=\"#c0392b\">\n";
  for (const auto& p : plot.markers)
    out << "<circle cx=\"" << sx(p.x()) << "\" cy=\"" << sy(p.y()) << "\" r=\"4\"/>\n";
  out << "</g>\n</svg>\n";
}

}  // namespace cli
