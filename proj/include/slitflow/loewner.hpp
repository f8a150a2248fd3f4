#pragma once

#include <complex>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "slitflow/drivers.hpp"

namespace slitflow {

/// One point carried by the forward flow. Im g is nonincreasing along the
/// flow; the probe is declared swallowed once Im g drops below 1e-6, where the
/// field magnitude makes further integration meaningless.
struct FlowProbe {
  std::complex<double> z0;
  std::complex<double> g;  // g_T(z0), or the last point before swallowing
  bool swallowed = false;
  double swallow_time = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::pair<double, std::complex<double>>> trail;

  std::string csv() const;  // t,re_g,im_g,status
};

/// Integrates dg/dt = sum_k 2 lambda_k / (g - V_k(t)) from z0 with classical
/// RK4 and piecewise-linear driver interpolation. sample_dt > 0 records the
/// trajectory at that spacing.
FlowProbe flow(const DriverPath& driving, std::complex<double> z0, double horizon,
               double sample_dt = 0.0);

struct FlowExpansion {
  double t = 0.0;
  double b = 0.0;  // fitted coefficient of 1/z
};

/// Least-squares fit of b in g_t(z) - z ~ b/z over z = R e^{i theta},
/// theta in {pi/4, pi/2, 3pi/4}, across the given radii. For probability
/// driving b equals twice the elapsed time.
FlowExpansion hcap_fit(const DriverPath& driving, double t,
                       std::span<const double> radii);

/// Tip of curve k at time t, recovered by reverse-time integration from a
/// lifted start V_k(t) + i*eps and Richardson extrapolation over {eps, eps/2}
/// (the lift error is O(eps^2)). Throws if the reverse flow leaves the upper
/// half-plane, which signals the lift was too small.
std::complex<double> trace_tip(const DriverPath& driving, std::size_t k, double t,
                               double eps_lift = 1e-4);

struct GridSpec {
  double re0 = -2.0, re1 = 2.0;
  int nre = 21;
  double im0 = 0.1, im1 = 2.0;
  int nim = 10;

  std::vector<std::complex<double>> points() const;
};

/// Elementwise `flow` over a rectangle; probes are independent.
std::vector<FlowProbe> grid_flow(const DriverPath& driving, const GridSpec& grid,
                                 double horizon);

/// re_z0,im_z0,re_g,im_g,swallow_time (blank when alive).
std::string grid_csv(std::span<const FlowProbe> probes);

}  // namespace slitflow
