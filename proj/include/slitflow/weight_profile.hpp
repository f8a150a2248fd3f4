#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "slitflow/atomic_measure.hpp"

namespace slitflow {

/// Piecewise-linear nondecreasing map L:[0,1]->[0,1] with L(0)=0, L(1)=1.
/// Built from growth weights via L(k/N) = sum_{j<=k} lambda_j and linear
/// interpolation in between.
class WeightProfile {
 public:
  struct Knot {
    double u;
    double value;
  };

  static WeightProfile identity();
  static WeightProfile from_weights(std::span<const double> lambdas);
  static WeightProfile from_knots(std::vector<Knot> knots);

  double operator()(double u) const;
  const std::vector<Knot>& knots() const { return knots_; }

 private:
  explicit WeightProfile(std::vector<Knot> knots);
  std::vector<Knot> knots_;
};

/// The measure whose cdf is L o G, where G is the cdf of m. For atomic m this
/// reweights atom k to L(G(x_k)) - L(G(x_k^-)).
AtomicMeasure compose_profile(const WeightProfile& L, const AtomicMeasure& m);

struct AssumptionReport {
  std::size_t n = 0;
  double max_weight = 0.0;
  /// N * max_k lambda_k: the empirical constant of the weight-decay condition.
  double c_estimate = 0.0;
  /// int sqrt(1 + x^2) d(empirical measure): the fixed tightness moment.
  double phi_moment = 0.0;
};

/// Reports the weight-decay constant and the phi-moment of the empirical
/// measure. Never aborts; flagging bad growth across N is the caller's call.
AssumptionReport check_assumptions(std::span<const double> lambdas,
                                   std::span<const double> positions);

/// A C^2 test function with its first two derivatives; complex values allowed.
struct TestFunction {
  std::function<std::complex<double>(double)> f;
  std::function<std::complex<double>(double)> df;
  std::function<std::complex<double>(double)> ddf;
};

/// Residual of the limiting evolution identity
///   d/dt int f d(alpha_t) = 2 int int (f'(x) - f'(y)) / (x - y) d(alpha_t)(x) d(mu_t)(y)
/// at time t. The time derivative uses centered differences on the sampled
/// paths; the difference quotient is f''(x) on the diagonal.
double mckean_residual(std::span<const AtomicMeasure> mu_path,
                       std::span<const AtomicMeasure> alpha_path,
                       std::span<const double> times, const TestFunction& f,
                       double t);

}  // namespace slitflow
