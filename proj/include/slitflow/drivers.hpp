#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "slitflow/atomic_measure.hpp"

namespace slitflow {

enum class DriverKind { multiple_sle, simultaneous, quad_diff };

std::string to_string(DriverKind kind);
DriverKind driver_kind_from_string(const std::string& s);

/// A pole (negative order) or zero (positive order) of the quadratic
/// differential, sitting in the upper half-plane.
struct PoleSpec {
  std::complex<double> location;
  int order = 0;
};

/// Raised when two drivers would cross or sit closer than the collision
/// threshold after the step controller has exhausted its halvings.
class CollisionError : public std::runtime_error {
 public:
  CollisionError(double time, double gap);
  double time() const { return time_; }
  double gap() const { return gap_; }

 private:
  double time_;
  double gap_;
};

/// Raised by `step` when a single proposed step would reorder the drivers
/// even after its internal halvings.
class OrderViolation : public std::runtime_error {
 public:
  explicit OrderViolation(double time);
};

/// Instantaneous state of the interacting driver system.
struct DriverSystem {
  DriverKind kind = DriverKind::multiple_sle;
  std::vector<double> v;        // driver positions, strictly increasing
  std::vector<double> lambdas;  // growth weights, sum to 1
  double kappa = 0.0;           // in [0, 4]; quad_diff is deterministic (kappa = 0)
  std::vector<std::complex<double>> poles;  // quad_diff: images of the marked points
  std::vector<int> pole_orders;
  double t = 0.0;

  void validate() const;
};

/// Pairwise drift with coefficients 2(lambda_k + lambda_j)/(V_k - V_j).
std::vector<double> drift_multiple_sle(std::span<const double> v,
                                       std::span<const double> lambdas);

/// Drift of the quadratic-differential system: 2 lambda_j / (V_k - V_j)
/// between drivers plus 2 Re( alpha_j lambda_k / (V_k - S_j) ) per pole
/// (the pole and its mirror image combine into the real part).
std::vector<double> drift_quad_diff(std::span<const double> v,
                                    std::span<const double> lambdas,
                                    std::span<const std::complex<double>> poles,
                                    std::span<const int> orders);

/// Velocity of the pole images under the flow field, dS_j/dt = sum_k 2 lambda_k / (S_j - V_k).
std::vector<std::complex<double>> pole_velocity(
    std::span<const std::complex<double>> poles, std::span<const double> v,
    std::span<const double> lambdas);

/// One stochastic step of size dt with the given standard Gaussians (one per
/// driver). Drift by the explicit trapezoidal (Heun) rule, noise additive with
/// scale sqrt(kappa lambda_k dt). If the proposal would reorder drivers the
/// step is retried on halved substeps (splitting the Brownian increment) up to
/// 40 halvings before an OrderViolation surfaces.
DriverSystem step(const DriverSystem& sys, double dt, std::span<const double> noise);

/// What `simulate` needs to integrate a driver system.
struct DriverConfig {
  DriverKind kind = DriverKind::multiple_sle;
  std::vector<double> initial_positions;
  std::vector<double> lambdas;
  double kappa = 0.0;
  std::vector<PoleSpec> poles;
  double horizon = 1.0;
  double dt = 1e-3;  // reporting grid step
  std::uint64_t seed = 0;

  void validate() const;
};

/// A sampled realization of the driver system on a uniform reporting grid.
/// Identical (config, seed) reproduces the path bit for bit.
struct DriverPath {
  DriverKind kind = DriverKind::multiple_sle;
  std::vector<double> times;
  std::vector<std::vector<double>> states;  // [time index][driver]
  std::vector<std::vector<std::complex<double>>> pole_states;
  std::vector<double> lambdas;
  std::vector<int> pole_orders;
  double kappa = 0.0;
  double dt = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t substeps = 0;  // accepted substeps over the whole run

  std::size_t n() const { return lambdas.size(); }
  double horizon() const { return times.empty() ? 0.0 : times.back(); }

  /// Piecewise-linear interpolation of driver k at time t.
  double value(std::size_t k, double t) const;
  /// Interpolates all drivers at time t into `out` (size n()).
  void interpolate(double t, std::span<double> out) const;

  /// mu_t: growth weights on the current driver positions.
  AtomicMeasure measure_at(double t) const;
  /// alpha_t: equal weights 1/N on the current driver positions.
  AtomicMeasure empirical_at(double t) const;
  /// M_t(z) = sum_k 2 lambda_k / (z - V_k(t)).
  std::complex<double> transform_at(std::complex<double> z, double t) const;

  std::string drivers_csv() const;  // time,k,value
  std::string poles_csv() const;    // time,j,re,im
};

/// Integrates the configured system on [0, horizon]. Substeps adapt to the
/// singular drift (see step controller notes in drivers.cpp); the reported
/// grid stays uniform with spacing dt. Throws CollisionError when a gap
/// cannot be resolved.
DriverPath simulate(const DriverConfig& config);

/// Convenience: a single driver frozen at `position` (the straight slit).
DriverPath constant_driver_path(double position, double horizon, double dt);

}  // namespace slitflow
