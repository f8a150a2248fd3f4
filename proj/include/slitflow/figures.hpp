#pragma once

#include <string>

#include "slitflow/scenarios.hpp"

namespace slitflow {

struct FigureOutput {
  std::string svg;
  std::string csv;
};

/// Driver bundle: one polyline per driver over time, the highlighted driver
/// drawn in red. CSV is the full driver table.
FigureOutput render_driver_figure(const ScenarioConfig& config);

/// Trajectory direction field of the quadratic differential as short oriented
/// segments. CSV is the full-resolution field table.
FigureOutput render_field_figure(const ScenarioConfig& config);

}  // namespace slitflow
