#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "slitflow/drivers.hpp"
#include "slitflow/loewner.hpp"

namespace slitflow {

/// Declarative description of one experiment: everything `simulate` needs
/// plus probe grid and requested measure snapshots. Serializes to JSON.
struct ScenarioConfig {
  std::string name;
  DriverKind kind = DriverKind::multiple_sle;
  int n = 0;
  double kappa = 0.0;
  double horizon = 1.0;
  double dt = 1e-3;
  std::uint64_t seed = 0;
  std::vector<double> positions;
  std::vector<double> weights;
  std::vector<PoleSpec> poles;
  GridSpec probes;
  std::vector<double> measure_times;
  /// Index (1-based) of a driver to highlight in figures; 0 = none.
  int highlight = 0;

  DriverConfig driver_config() const;
  std::string to_json() const;
  static ScenarioConfig from_json_text(const std::string& text);
};

/// Overrides applied on top of a builtin parameterization.
struct ScenarioOverrides {
  int n = 0;          // 0 = keep default
  double kappa = -1;  // negative = keep default
  double horizon = 0;
  double dt = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

/// Builtin experiment families:
///   prince_charles  x_k = k/N^2, lambda_k = (1 + k/N) / (S_N N), S_N = 1 + (N+1)/(2N)
///   johnny          x_k = k/N and lambda_k = 1/(2(N-1)) for k < N; x_N = 2 with mass 1/2
///   molly           N = 2K+1 symmetric, mass 1/2 at the centre, 1/(4K) elsewhere
///   semicircle      equal speeds, N points packed in [-1e-3, 1e-3]
///   fig2 / fig3     johnny / molly at N = 51, kappa = 1, horizon 1
///   fig7 / fig8     ten double zeros at 2k/9 - 1 with a pole (resp. zero) of
///                   order 10 at i
ScenarioConfig builtin(const std::string& name, const ScenarioOverrides& o = {});
std::vector<std::string> builtin_names();

/// Roots, marked points and growth weights of the quadratic differential
/// Q(z) = prod_k (z - x_k)^2 * prod_j (z - s_j)^(a_j) (z - conj s_j)^(a_j).
struct QuadDiffConfig {
  std::vector<double> roots;
  std::vector<PoleSpec> poles;
  std::vector<double> lambdas;
};

QuadDiffConfig quad_diff_of(const ScenarioConfig& config);

/// Trajectory direction theta(z) = -arg Q(z) / 2 mod pi, in [0, pi).
/// The real axis is itself a trajectory (theta = 0) and trajectories leave
/// double zeros at right angles.
double quad_field_direction(const QuadDiffConfig& q, std::complex<double> z);

struct QuadFieldSample {
  std::complex<double> z;
  double theta;
};

/// Direction field over a grid, skipping points within 1e-6 of a root or pole.
std::vector<QuadFieldSample> quad_field(const QuadDiffConfig& q, const GridSpec& grid);
std::string quad_field_csv(std::span<const QuadFieldSample> samples);

/// Escape diagnostic for the mass-1/2 outlier: runs the deterministic system
/// for each N, reports the terminal top-driver values, the log-log growth
/// exponent of (V_top - 2) against N, and whether every run was monotone.
struct EscapeDiagnostic {
  std::vector<int> n_values;
  std::vector<double> terminal_top;  // V_{N,N}(t)
  double slope = 0.0;
  bool monotone = true;
};
EscapeDiagnostic johnny_escape_diagnostic(std::span<const int> n_values, double t,
                                          double dt);

/// Initial-slope blowup report for the packed-cluster example. The pairwise
/// sum T_N(0) = sum_{j != k} (l_k^2 - l_j^2) / (x_k - x_j) collapses because
/// every difference quotient (l_k - l_j)/(x_k - x_j) equals 1/S_N.
struct BlowupReport {
  int n = 0;
  /// Exact pairwise sum (equals 2 (N-1) / S_N analytically).
  double t_derivative = 0.0;
  double t_derivative_closed_form = 0.0;
  /// Largest deviation of a pairwise quotient from 1/S_N.
  double quotient_identity_error = 0.0;
  /// Lower bound sum_{j != k} lambda_1 / S_N and its closed form
  /// (N^2 - N)(1/N + 1/N^2) / S_N^2.
  double lower_bound = 0.0;
  double lower_bound_closed_form = 0.0;
};
BlowupReport prince_charles_blowup(int n);

/// Conservation defect of the pole-free equal-speed system: flows a probe
/// grid and reports e_N = max_z |M_{N,t}(g_{N,t}(z)) - M_{N,0}(z)| for each N
/// plus consecutive ratios e_N / e_{2N}.
struct CharacteristicsResult {
  std::vector<int> n_values;
  std::vector<double> defects;
  std::vector<double> ratios;
};
CharacteristicsResult characteristics_check(std::span<const int> n_values, double t,
                                            double dt, const GridSpec& grid);

}  // namespace slitflow
