#include "slitflow/loewner.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "slitflow/csv.hpp"

namespace slitflow {

namespace {

constexpr double kSwallowTol = 1e-6;
constexpr double kStepFraction = 1e-3;  // dt_flow <= this fraction of Im g

// Forward Loewner field at (w, t) for the interpolated driving measure.
struct Field {
  const DriverPath& path;
  mutable std::vector<double> buf;

  explicit Field(const DriverPath& p) : path(p), buf(p.n()) {}

  std::complex<double> operator()(std::complex<double> w, double t) const {
    path.interpolate(t, buf);
    std::complex<double> sum = 0.0;
    for (std::size_t k = 0; k < buf.size(); ++k)
      sum += 2.0 * path.lambdas[k] / (w - buf[k]);
    return sum;
  }
};

template <typename F>
std::complex<double> rk4(const F& f, std::complex<double> w, double t, double h,
                         std::complex<double> k1) {
  const std::complex<double> k2 = f(w + 0.5 * h * k1, t + 0.5 * h);
  const std::complex<double> k3 = f(w + 0.5 * h * k2, t + 0.5 * h);
  const std::complex<double> k4 = f(w + h * k3, t + h);
  return w + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Step limit: a fraction of the current height, both absolutely and relative
// to the local field magnitude, so the approach to the real line stays
// resolved all the way down to the swallow tolerance.
double flow_step(double imag_part, double field_magnitude, double grid_dt) {
  double h = std::min(grid_dt, kStepFraction * imag_part);
  if (field_magnitude > 0.0) h = std::min(h, 0.25 * imag_part / field_magnitude);
  return h;
}

}  // namespace

FlowProbe flow(const DriverPath& driving, std::complex<double> z0, double horizon,
               double sample_dt) {
  if (!(z0.imag() > 0.0))
    throw std::invalid_argument("flow: z0 must lie in the upper half-plane");
  if (horizon > driving.horizon() + 1e-12)
    throw std::invalid_argument("flow: horizon exceeds the driving path");

  const Field field(driving);
  FlowProbe probe;
  probe.z0 = z0;

  std::complex<double> g = z0;
  double t = 0.0;
  double next_sample = 0.0;
  while (t < horizon) {
    if (sample_dt > 0.0 && t >= next_sample) {
      probe.trail.emplace_back(t, g);
      next_sample += sample_dt;
    }
    if (g.imag() < kSwallowTol) {
      probe.swallowed = true;
      probe.swallow_time = t;
      probe.g = g;
      return probe;
    }
    const std::complex<double> k1 = field(g, t);
    double h = std::min(flow_step(g.imag(), std::abs(k1), driving.dt), horizon - t);
    std::complex<double> gn = rk4(field, g, t, h, k1);
    // the field stiffens near the real line; retreat if a step overshoots
    while (!(gn.imag() > 0.0) && h > 1e-16) {
      h *= 0.5;
      gn = rk4(field, g, t, h, k1);
    }
    if (!(gn.imag() > 0.0)) {
      probe.swallowed = true;
      probe.swallow_time = t;
      probe.g = g;
      return probe;
    }
    g = gn;
    t += h;
  }
  probe.g = g;
  if (sample_dt > 0.0) probe.trail.emplace_back(t, g);
  return probe;
}

std::string FlowProbe::csv() const {
  std::string out = "t,re_g,im_g,status\n";
  for (const auto& [t, g] : trail)
    out += fmt17(t) + "," + fmt17(g.real()) + "," + fmt17(g.imag()) + ",alive\n";
  if (swallowed)
    out += fmt17(swallow_time) + "," + fmt17(g.real()) + "," + fmt17(g.imag()) +
           ",swallowed\n";
  return out;
}

FlowExpansion hcap_fit(const DriverPath& driving, double t,
                       std::span<const double> radii) {
  if (radii.empty()) throw std::invalid_argument("hcap_fit: need at least one radius");
  const double thetas[] = {std::numbers::pi / 4.0, std::numbers::pi / 2.0,
                           3.0 * std::numbers::pi / 4.0};
  double num = 0.0;
  double den = 0.0;
  for (double r : radii) {
    for (double theta : thetas) {
      const std::complex<double> z = std::polar(r, theta);
      const FlowProbe probe = flow(driving, z, t);
      const std::complex<double> delta = probe.g - z;
      const std::complex<double> basis = 1.0 / z;
      num += (delta * std::conj(basis)).real();
      den += std::norm(basis);
    }
  }
  return FlowExpansion{t, num / den};
}

namespace {

std::complex<double> trace_once(const DriverPath& driving, std::size_t k, double t,
                                double eps) {
  // reverse flow: dh/ds = -field(h, t - s); it can only push points upward
  const Field field(driving);
  const auto reverse = [&](std::complex<double> w, double s) {
    return -field(w, t - s);
  };
  std::complex<double> h = driving.value(k, t) + std::complex<double>(0.0, eps);
  double s = 0.0;
  while (s < t) {
    const std::complex<double> k1 = reverse(h, s);
    const double step = std::min(flow_step(h.imag(), std::abs(k1), driving.dt), t - s);
    h = rk4(reverse, h, s, step, k1);
    if (!(h.imag() > 0.0))
      throw std::runtime_error("trace_tip: reverse flow left the upper half-plane; "
                               "increase eps_lift");
    s += step;
  }
  return h;
}

}  // namespace

std::complex<double> trace_tip(const DriverPath& driving, std::size_t k, double t,
                               double eps_lift) {
  if (k >= driving.n()) throw std::invalid_argument("trace_tip: driver index out of range");
  if (t < 0.0 || t > driving.horizon() + 1e-12)
    throw std::invalid_argument("trace_tip: t outside the driving horizon");
  if (t == 0.0) return driving.value(k, 0.0) + std::complex<double>(0.0, eps_lift);
  const std::complex<double> coarse = trace_once(driving, k, t, eps_lift);
  const std::complex<double> fine = trace_once(driving, k, t, 0.5 * eps_lift);
  return (4.0 * fine - coarse) / 3.0;
}

std::vector<std::complex<double>> GridSpec::points() const {
  if (nre < 1 || nim < 1) throw std::invalid_argument("GridSpec: empty grid");
  std::vector<std::complex<double>> pts;
  pts.reserve(static_cast<std::size_t>(nre) * nim);
  for (int i = 0; i < nim; ++i) {
    const double y = nim == 1 ? im0 : im0 + (im1 - im0) * i / (nim - 1.0);
    for (int j = 0; j < nre; ++j) {
      const double x = nre == 1 ? re0 : re0 + (re1 - re0) * j / (nre - 1.0);
      pts.emplace_back(x, y);
    }
  }
  return pts;
}

std::vector<FlowProbe> grid_flow(const DriverPath& driving, const GridSpec& grid,
                                 double horizon) {
  std::vector<FlowProbe> probes;
  for (const auto& z : grid.points()) probes.push_back(flow(driving, z, horizon));
  return probes;
}

std::string grid_csv(std::span<const FlowProbe> probes) {
  std::string out = "re_z0,im_z0,re_g,im_g,swallow_time\n";
  for (const auto& p : probes) {
    out += fmt17(p.z0.real()) + "," + fmt17(p.z0.imag()) + "," + fmt17(p.g.real()) +
           "," + fmt17(p.g.imag()) + ",";
    if (p.swallowed) out += fmt17(p.swallow_time);
    out += "\n";
  }
  return out;
}

}  // namespace slitflow
