#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace slitflow {

/// Minimal hand-emitted SVG: polylines and short oriented segments in a fixed
/// 800x600 viewBox. The world-to-view transform is linear and exposed so a
/// run manifest can record it.
class SvgDocument {
 public:
  SvgDocument(double world_x0, double world_x1, double world_y0, double world_y1);

  void add_comment(const std::string& text);
  void add_polyline(std::span<const std::pair<double, double>> points,
                    const std::string& stroke, double stroke_width);
  /// Segment of the given world length centred at (x, y) along angle theta.
  void add_direction(double x, double y, double theta, double length,
                     const std::string& stroke, double stroke_width);

  double scale_x() const { return sx_; }
  double scale_y() const { return sy_; }
  double offset_x() const { return ox_; }
  double offset_y() const { return oy_; }

  std::string str() const;

 private:
  std::pair<double, double> to_view(double x, double y) const;

  double sx_, sy_, ox_, oy_;
  std::vector<std::string> elements_;
};

}  // namespace slitflow
