#include "slitflow/figures.hpp"

#include <algorithm>
#include <cmath>

#include "slitflow/svg.hpp"

namespace slitflow {

FigureOutput render_driver_figure(const ScenarioConfig& config) {
  const DriverPath path = simulate(config.driver_config());

  double vmin = path.states.front().front();
  double vmax = path.states.front().back();
  for (const auto& state : path.states) {
    vmin = std::min(vmin, state.front());
    vmax = std::max(vmax, state.back());
  }
  const double pad = 0.05 * std::max(1e-12, vmax - vmin);
  SvgDocument doc(0.0, path.horizon(), vmin - pad, vmax + pad);
  doc.add_comment("scenario " + config.name + " seed " + std::to_string(config.seed));

  // keep polylines readable: at most ~250 vertices each
  const std::size_t stride = std::max<std::size_t>(1, path.times.size() / 250);
  const std::size_t highlight =
      config.highlight > 0 ? static_cast<std::size_t>(config.highlight - 1) : path.n();
  std::vector<std::pair<double, double>> pts;
  for (std::size_t k = 0; k < path.n(); ++k) {
    if (k == highlight) continue;
    pts.clear();
    for (std::size_t i = 0; i < path.times.size(); i += stride)
      pts.emplace_back(path.times[i], path.states[i][k]);
    if ((path.times.size() - 1) % stride != 0)
      pts.emplace_back(path.times.back(), path.states.back()[k]);
    doc.add_polyline(pts, "#555555", 1.0);
  }
  if (highlight < path.n()) {
    pts.clear();
    for (std::size_t i = 0; i < path.times.size(); i += stride)
      pts.emplace_back(path.times[i], path.states[i][highlight]);
    if ((path.times.size() - 1) % stride != 0)
      pts.emplace_back(path.times.back(), path.states.back()[highlight]);
    doc.add_polyline(pts, "red", 1.5);
  }
  return {doc.str(), path.drivers_csv()};
}

FigureOutput render_field_figure(const ScenarioConfig& config) {
  const QuadDiffConfig q = quad_diff_of(config);
  const auto samples = quad_field(q, config.probes);

  SvgDocument doc(config.probes.re0, config.probes.re1, 0.0, config.probes.im1);
  doc.add_comment("scenario " + config.name);
  const double dx = (config.probes.re1 - config.probes.re0) /
                    std::max(1, config.probes.nre - 1);
  const double dy = (config.probes.im1 - config.probes.im0) /
                    std::max(1, config.probes.nim - 1);
  // thin the grid for display; the CSV keeps every sample
  const int step_x = std::max(1, config.probes.nre / 64);
  const int step_y = std::max(1, config.probes.nim / 40);
  const double seg = 0.8 * std::min(dx * step_x, dy * step_y);
  for (const auto& s : samples) {
    const int col = static_cast<int>(std::lround((s.z.real() - config.probes.re0) / dx));
    const int row = static_cast<int>(std::lround((s.z.imag() - config.probes.im0) / dy));
    if (col % step_x != 0 || row % step_y != 0) continue;
    doc.add_direction(s.z.real(), s.z.imag(), s.theta, seg, "#336699", 1.0);
  }
  return {doc.str(), quad_field_csv(samples)};
}

}  // namespace slitflow
