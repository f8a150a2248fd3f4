#include "slitflow/drivers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "slitflow/csv.hpp"
#include "slitflow/rng.hpp"

namespace slitflow {

namespace {

constexpr double kCollisionGap = 1e-9;
constexpr int kMaxHalvings = 40;
// Accuracy guard for the singular drift: a substep may change an adjacent gap
// by at most this fraction of the gap itself.
constexpr double kGapBudget = 0.25;

bool strictly_increasing(std::span<const double> v) {
  for (std::size_t k = 0; k + 1 < v.size(); ++k)
    if (!(v[k] < v[k + 1])) return false;
  return true;
}

double min_gap(std::span<const double> v) {
  double g = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < v.size(); ++k) g = std::min(g, v[k + 1] - v[k]);
  return g;
}

void check_collision(std::span<const double> v, double time) {
  if (v.size() < 2) return;
  const double g = min_gap(v);
  if (g < kCollisionGap) throw CollisionError(time, g);
}

}  // namespace

std::string to_string(DriverKind kind) {
  switch (kind) {
    case DriverKind::multiple_sle: return "multiple_sle";
    case DriverKind::simultaneous: return "simultaneous";
    case DriverKind::quad_diff: return "quad_diff";
  }
  return "unknown";
}

DriverKind driver_kind_from_string(const std::string& s) {
  if (s == "multiple_sle") return DriverKind::multiple_sle;
  if (s == "simultaneous") return DriverKind::simultaneous;
  if (s == "quad_diff") return DriverKind::quad_diff;
  throw std::invalid_argument("unknown driver kind: " + s);
}

CollisionError::CollisionError(double time, double gap)
    : std::runtime_error("driver near-collision at t = " + fmt17(time) +
                         " (gap " + fmt17(gap) + ")"),
      time_(time),
      gap_(gap) {}

OrderViolation::OrderViolation(double time)
    : std::runtime_error("step would reorder drivers at t = " + fmt17(time)) {}

void DriverSystem::validate() const {
  if (v.empty() || v.size() != lambdas.size())
    throw std::invalid_argument("DriverSystem: positions/weights size mismatch");
  if (!strictly_increasing(v))
    throw std::invalid_argument("DriverSystem: positions must be strictly increasing");
  double sum = 0.0;
  for (double l : lambdas) {
    if (l < 0.0) throw std::invalid_argument("DriverSystem: negative weight");
    sum += l;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("DriverSystem: weights must sum to 1");
  if (kappa < 0.0 || kappa > 4.0)
    throw std::invalid_argument("DriverSystem: kappa must lie in [0, 4]");
  if (poles.size() != pole_orders.size())
    throw std::invalid_argument("DriverSystem: pole/order size mismatch");
  if (kind != DriverKind::quad_diff && !poles.empty())
    throw std::invalid_argument("DriverSystem: poles require quad_diff kind");
  for (const auto& s : poles)
    if (!(s.imag() > 0.0))
      throw std::invalid_argument("DriverSystem: poles must lie in the upper half-plane");
}

std::vector<double> drift_multiple_sle(std::span<const double> v,
                                       std::span<const double> lambdas) {
  const std::size_t n = v.size();
  if (n != lambdas.size()) throw std::invalid_argument("drift: size mismatch");
  check_collision(v, std::numeric_limits<double>::quiet_NaN());
  std::vector<double> d(n, 0.0);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double vk = v[k];
    const double lk = lambdas[k];
    double acc = 0.0;
    for (std::size_t j = k + 1; j < n; ++j) {
      const double term = 2.0 * (lk + lambdas[j]) / (vk - v[j]);
      acc += term;
      d[j] -= term;
    }
    d[k] += acc;
  }
  return d;
}

std::vector<double> drift_quad_diff(std::span<const double> v,
                                    std::span<const double> lambdas,
                                    std::span<const std::complex<double>> poles,
                                    std::span<const int> orders) {
  const std::size_t n = v.size();
  if (n != lambdas.size()) throw std::invalid_argument("drift: size mismatch");
  if (poles.size() != orders.size()) throw std::invalid_argument("drift: pole size mismatch");
  check_collision(v, std::numeric_limits<double>::quiet_NaN());
  for (const auto& s : poles)
    if (!(s.imag() > 0.0))
      throw std::invalid_argument("drift_quad_diff: poles must stay in the upper half-plane");
  std::vector<double> d(n, 0.0);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double vk = v[k];
    const double lk = lambdas[k];
    double acc = 0.0;
    for (std::size_t j = k + 1; j < n; ++j) {
      const double q = 2.0 / (vk - v[j]);
      acc += lambdas[j] * q;
      d[j] -= lk * q;
    }
    d[k] += acc;
  }
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> sum = 0.0;
    for (std::size_t j = 0; j < poles.size(); ++j)
      sum += static_cast<double>(orders[j]) / (v[k] - poles[j]);
    // pole plus its conjugate mirror: the two sums collapse to a real part
    d[k] += 2.0 * lambdas[k] * sum.real();
  }
  return d;
}

std::vector<std::complex<double>> pole_velocity(
    std::span<const std::complex<double>> poles, std::span<const double> v,
    std::span<const double> lambdas) {
  std::vector<std::complex<double>> out(poles.size());
  for (std::size_t j = 0; j < poles.size(); ++j) {
    std::complex<double> sum = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) sum += 2.0 * lambdas[k] / (poles[j] - v[k]);
    out[j] = sum;
  }
  return out;
}

namespace {

std::vector<double> drift_of(const DriverSystem& sys) {
  if (sys.kind == DriverKind::quad_diff)
    return drift_quad_diff(sys.v, sys.lambdas, sys.poles, sys.pole_orders);
  return drift_multiple_sle(sys.v, sys.lambdas);
}

bool poles_alive(std::span<const std::complex<double>> s) {
  for (const auto& p : s)
    if (!(p.imag() > 0.0)) return false;
  return true;
}

// One trapezoidal proposal over h with a fixed Brownian increment.
// Returns false if the proposal leaves the admissible region.
bool propose(const DriverSystem& sys, const std::vector<double>& d1, double h,
             std::span<const double> dw, DriverSystem& out) {
  const std::size_t n = sys.v.size();
  std::vector<double> vp(n);
  for (std::size_t k = 0; k < n; ++k) vp[k] = sys.v[k] + h * d1[k] + dw[k];
  std::vector<std::complex<double>> sp;
  std::vector<std::complex<double>> p1;
  if (!sys.poles.empty()) {
    p1 = pole_velocity(sys.poles, sys.v, sys.lambdas);
    sp.resize(sys.poles.size());
    for (std::size_t j = 0; j < sp.size(); ++j) sp[j] = sys.poles[j] + h * p1[j];
    if (!poles_alive(sp)) return false;
  }
  if (!strictly_increasing(vp)) return false;

  DriverSystem mid = sys;
  mid.v = vp;
  mid.poles = sp;
  const std::vector<double> d2 = drift_of(mid);

  out = sys;
  for (std::size_t k = 0; k < n; ++k)
    out.v[k] = sys.v[k] + 0.5 * h * (d1[k] + d2[k]) + dw[k];
  if (!strictly_increasing(out.v)) return false;
  if (!sys.poles.empty()) {
    const std::vector<std::complex<double>> p2 = pole_velocity(sp, vp, sys.lambdas);
    for (std::size_t j = 0; j < out.poles.size(); ++j)
      out.poles[j] = sys.poles[j] + 0.5 * h * (p1[j] + p2[j]);
    if (!poles_alive(out.poles)) return false;
  }
  out.t = sys.t + h;
  return true;
}

DriverSystem step_impl(const DriverSystem& sys, double dt,
                       std::span<const double> dw, int depth) {
  const std::vector<double> d1 = drift_of(sys);
  DriverSystem next;
  if (propose(sys, d1, dt, dw, next)) return next;
  if (depth >= kMaxHalvings) throw OrderViolation(sys.t);
  // Split the increment evenly across the two half-steps; the drift gets
  // re-evaluated on each half, which is what resolves the near-crossing.
  std::vector<double> half(dw.size());
  for (std::size_t k = 0; k < dw.size(); ++k) half[k] = 0.5 * dw[k];
  DriverSystem first = step_impl(sys, 0.5 * dt, half, depth + 1);
  return step_impl(first, 0.5 * dt, half, depth + 1);
}

}  // namespace

DriverSystem step(const DriverSystem& sys, double dt, std::span<const double> noise) {
  sys.validate();
  if (dt <= 0.0) throw std::invalid_argument("step: dt must be positive");
  const bool stochastic = sys.kind != DriverKind::quad_diff && sys.kappa > 0.0;
  if (stochastic && noise.size() != sys.v.size())
    throw std::invalid_argument("step: need one Gaussian per driver");
  std::vector<double> dw(sys.v.size(), 0.0);
  if (stochastic)
    for (std::size_t k = 0; k < dw.size(); ++k)
      dw[k] = std::sqrt(sys.kappa * sys.lambdas[k] * dt) * noise[k];
  return step_impl(sys, dt, dw, 0);
}

void DriverConfig::validate() const {
  if (initial_positions.empty())
    throw std::invalid_argument("DriverConfig: need at least one driver");
  if (initial_positions.size() != lambdas.size())
    throw std::invalid_argument("DriverConfig: positions/weights size mismatch");
  if (!strictly_increasing(initial_positions))
    throw std::invalid_argument("DriverConfig: initial positions must be strictly increasing");
  double sum = 0.0;
  for (double l : lambdas) {
    if (l < 0.0) throw std::invalid_argument("DriverConfig: negative weight");
    sum += l;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("DriverConfig: weights must sum to 1");
  if (kappa < 0.0 || kappa > 4.0)
    throw std::invalid_argument("DriverConfig: kappa must lie in [0, 4]");
  if (horizon <= 0.0 || dt <= 0.0)
    throw std::invalid_argument("DriverConfig: horizon and dt must be positive");
  if (kind != DriverKind::quad_diff && !poles.empty())
    throw std::invalid_argument("DriverConfig: poles require quad_diff kind");
  for (const auto& p : poles)
    if (!(p.location.imag() > 0.0))
      throw std::invalid_argument("DriverConfig: poles must lie in the upper half-plane");
}

DriverPath simulate(const DriverConfig& config) {
  config.validate();
  const std::size_t n = config.initial_positions.size();
  const bool quad = config.kind == DriverKind::quad_diff;
  const double kappa = quad ? 0.0 : config.kappa;  // the pole system is deterministic
  const double max_lambda = *std::max_element(config.lambdas.begin(), config.lambdas.end());

  const std::int64_t ngrid =
      std::max<std::int64_t>(1, std::llround(config.horizon / config.dt));
  const double dt_grid = config.horizon / static_cast<double>(ngrid);

  DriverPath path;
  path.kind = config.kind;
  path.lambdas = config.lambdas;
  path.kappa = kappa;
  path.dt = dt_grid;
  path.seed = config.seed;
  path.times.reserve(ngrid + 1);
  path.states.reserve(ngrid + 1);

  std::vector<double> v = config.initial_positions;
  std::vector<std::complex<double>> s;
  for (const auto& p : config.poles) {
    s.push_back(p.location);
    path.pole_orders.push_back(p.order);
  }

  path.times.push_back(0.0);
  path.states.push_back(v);
  if (quad) path.pole_states.push_back(s);

  std::uint64_t counter = 0;  // accepted substeps; keys the noise
  std::vector<double> dw(n, 0.0);
  std::vector<double> vp(n), vn(n);
  double h_try = dt_grid;
  double t = 0.0;

  for (std::int64_t g = 0; g < ngrid; ++g) {
    const double t_end = static_cast<double>(g + 1) * dt_grid;
    while (t < t_end - 1e-12 * dt_grid) {
      double h = std::min(h_try, t_end - t);
      if (t_end - t - h < 1e-12 * dt_grid) h = t_end - t;

      const std::vector<double> d1 =
          quad ? drift_quad_diff(v, config.lambdas, s, path.pole_orders)
               : drift_multiple_sle(v, config.lambdas);
      std::vector<std::complex<double>> p1;
      if (!s.empty()) p1 = pole_velocity(s, v, config.lambdas);

      int halvings = 0;
      const auto halve = [&] {
        if (++halvings > kMaxHalvings) throw CollisionError(t, min_gap(v));
        h *= 0.5;
      };

      // Step-size conditions, all monotone in h: the noise scale must stay
      // below the smallest gap, and neither gaps nor pole heights may change
      // by more than a fixed fraction within one substep.
      for (;;) {
        bool ok = true;
        if (kappa > 0.0 && n > 1) {
          const double noise_scale = 10.0 * std::sqrt(kappa * max_lambda * h);
          if (min_gap(v) < noise_scale) ok = false;
        }
        if (ok) {
          for (std::size_t k = 0; k + 1 < n; ++k) {
            if (std::abs(d1[k + 1] - d1[k]) * h > kGapBudget * (v[k + 1] - v[k])) {
              ok = false;
              break;
            }
          }
        }
        if (ok) {
          for (std::size_t j = 0; j < s.size(); ++j) {
            if (std::abs(p1[j]) * h > kGapBudget * s[j].imag()) {
              ok = false;
              break;
            }
          }
        }
        if (ok) break;
        halve();
      }

      // Proposal loop; the noise for this substep is re-scaled, not re-drawn,
      // when the step shrinks.
      for (;;) {
        if (kappa > 0.0) {
          for (std::size_t k = 0; k < n; ++k)
            dw[k] = std::sqrt(kappa * config.lambdas[k] * h) *
                    gaussian_at(config.seed, k, counter);
        }
        for (std::size_t k = 0; k < n; ++k) vp[k] = v[k] + h * d1[k] + dw[k];
        std::vector<std::complex<double>> sp(s.size());
        for (std::size_t j = 0; j < s.size(); ++j) sp[j] = s[j] + h * p1[j];
        if (!strictly_increasing(vp) || !poles_alive(sp)) {
          halve();
          continue;
        }
        const std::vector<double> d2 =
            quad ? drift_quad_diff(vp, config.lambdas, sp, path.pole_orders)
                 : drift_multiple_sle(vp, config.lambdas);
        for (std::size_t k = 0; k < n; ++k)
          vn[k] = v[k] + 0.5 * h * (d1[k] + d2[k]) + dw[k];
        if (!strictly_increasing(vn)) {
          halve();
          continue;
        }
        if (!s.empty()) {
          const std::vector<std::complex<double>> p2 =
              pole_velocity(sp, vp, config.lambdas);
          std::vector<std::complex<double>> sn(s.size());
          for (std::size_t j = 0; j < s.size(); ++j)
            sn[j] = s[j] + 0.5 * h * (p1[j] + p2[j]);
          if (!poles_alive(sn)) {
            halve();
            continue;
          }
          s = std::move(sn);
        }
        break;
      }

      v = vn;
      t += h;
      ++counter;
      h_try = std::min(2.0 * h, dt_grid);
    }
    t = t_end;
    path.times.push_back(t_end);
    path.states.push_back(v);
    if (quad) path.pole_states.push_back(s);
  }
  path.substeps = counter;
  return path;
}

DriverPath constant_driver_path(double position, double horizon, double dt) {
  DriverConfig cfg;
  cfg.kind = DriverKind::multiple_sle;
  cfg.initial_positions = {position};
  cfg.lambdas = {1.0};
  cfg.kappa = 0.0;
  cfg.horizon = horizon;
  cfg.dt = dt;
  return simulate(cfg);
}

double DriverPath::value(std::size_t k, double t) const {
  std::vector<double> out(n());
  interpolate(t, out);
  return out[k];
}

void DriverPath::interpolate(double t, std::span<double> out) const {
  if (times.empty()) throw std::logic_error("DriverPath: empty path");
  if (t <= times.front()) {
    std::copy(states.front().begin(), states.front().end(), out.begin());
    return;
  }
  if (t >= times.back()) {
    std::copy(states.back().begin(), states.back().end(), out.begin());
    return;
  }
  const double pos = t / dt;
  std::size_t i = static_cast<std::size_t>(pos);
  if (i + 1 >= times.size()) i = times.size() - 2;
  const double w = (t - times[i]) / (times[i + 1] - times[i]);
  const auto& a = states[i];
  const auto& b = states[i + 1];
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] + w * (b[k] - a[k]);
}

AtomicMeasure DriverPath::measure_at(double t) const {
  std::vector<double> pos(n());
  interpolate(t, pos);
  return AtomicMeasure::from_particles(pos, lambdas);
}

AtomicMeasure DriverPath::empirical_at(double t) const {
  std::vector<double> pos(n());
  interpolate(t, pos);
  return AtomicMeasure::empirical(pos);
}

std::complex<double> DriverPath::transform_at(std::complex<double> z, double t) const {
  std::vector<double> pos(n());
  interpolate(t, pos);
  std::complex<double> sum = 0.0;
  for (std::size_t k = 0; k < pos.size(); ++k) sum += 2.0 * lambdas[k] / (z - pos[k]);
  return sum;
}

std::string DriverPath::drivers_csv() const {
  std::string out = "time,k,value\n";
  for (std::size_t i = 0; i < times.size(); ++i)
    for (std::size_t k = 0; k < states[i].size(); ++k)
      out += fmt17(times[i]) + "," + std::to_string(k + 1) + "," +
             fmt17(states[i][k]) + "\n";
  return out;
}

std::string DriverPath::poles_csv() const {
  std::string out = "time,j,re,im\n";
  for (std::size_t i = 0; i < pole_states.size(); ++i)
    for (std::size_t j = 0; j < pole_states[i].size(); ++j)
      out += fmt17(times[i]) + "," + std::to_string(j + 1) + "," +
             fmt17(pole_states[i][j].real()) + "," + fmt17(pole_states[i][j].imag()) + "\n";
  return out;
}

}  // namespace slitflow
