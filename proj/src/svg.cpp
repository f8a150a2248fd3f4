#include "slitflow/svg.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace slitflow {

namespace {
constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;
constexpr double kMargin = 40.0;

std::string fmt2(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", x);
  return buf;
}
}  // namespace

SvgDocument::SvgDocument(double world_x0, double world_x1, double world_y0,
                         double world_y1) {
  if (!(world_x1 > world_x0) || !(world_y1 > world_y0))
    throw std::invalid_argument("SvgDocument: empty world box");
  sx_ = (kWidth - 2 * kMargin) / (world_x1 - world_x0);
  sy_ = (kHeight - 2 * kMargin) / (world_y1 - world_y0);
  ox_ = kMargin - sx_ * world_x0;
  // y axis points up in world coordinates, down in view coordinates
  oy_ = kHeight - kMargin + sy_ * world_y0;
}

std::pair<double, double> SvgDocument::to_view(double x, double y) const {
  return {sx_ * x + ox_, oy_ - sy_ * y};
}

void SvgDocument::add_comment(const std::string& text) {
  elements_.push_back("<!-- " + text + " -->");
}

void SvgDocument::add_polyline(std::span<const std::pair<double, double>> points,
                               const std::string& stroke, double stroke_width) {
  std::string el = "<polyline fill=\"none\" stroke=\"" + stroke +
                   "\" stroke-width=\"" + fmt2(stroke_width) + "\" points=\"";
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto [vx, vy] = to_view(points[i].first, points[i].second);
    if (i) el += " ";
    el += fmt2(vx) + "," + fmt2(vy);
  }
  el += "\"/>";
  elements_.push_back(std::move(el));
}

void SvgDocument::add_direction(double x, double y, double theta, double length,
                                const std::string& stroke, double stroke_width) {
  const double dx = 0.5 * length * std::cos(theta);
  const double dy = 0.5 * length * std::sin(theta);
  const auto [ax, ay] = to_view(x - dx, y - dy);
  const auto [bx, by] = to_view(x + dx, y + dy);
  elements_.push_back("<line stroke=\"" + stroke + "\" stroke-width=\"" +
                      fmt2(stroke_width) + "\" x1=\"" + fmt2(ax) + "\" y1=\"" +
                      fmt2(ay) + "\" x2=\"" + fmt2(bx) + "\" y2=\"" + fmt2(by) +
                      "\"/>");
}

std::string SvgDocument::str() const {
  std::string out =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" "
      "width=\"800\" height=\"600\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
  for (const auto& el : elements_) {
    out += el;
    out += "\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace slitflow
