#pragma once

#include <complex>
#include <functional>

#include "slitflow/atomic_measure.hpp"
#include "slitflow/drivers.hpp"

namespace slitflow {

/// Transform of the centred semicircle law with variance 4t:
/// M_t(z) = 4 / (z + sqrt(z^2 - 16 t)). The root is taken as
/// z * sqrt(1 - 16 t / z^2) with the principal square root of the second
/// factor, which pins the ~z asymptotic and stays continuous on the upper
/// half-plane.
std::complex<double> semicircle_transform(std::complex<double> z, double t);

/// A time-dependent transform together with the transport coefficient of the
/// equation it is checked against: dM/dt = -c * M * dM/dz
/// (c = 2 for the equal-speed growth limit, c = 1 for the pole-coupled system).
struct BurgersSolution {
  double coefficient = 2.0;
  std::function<std::complex<double>(std::complex<double>, double)> eval;

  std::complex<double> operator()(std::complex<double> z, double t) const {
    return eval(z, t);
  }
};

/// Exact point-mass-start solution family for either coefficient:
/// M_t(z) = 4 / (z + sqrt(z^2 - 8 c t)).
BurgersSolution semicircle_solution(double coefficient = 2.0);

/// Transform frozen in time (does not solve the transport equation unless
/// degenerate; useful as a negative control).
BurgersSolution frozen_transform(AtomicMeasure m, double coefficient = 2.0);

/// Empirical transform of a simulated driver path, interpolated in t.
BurgersSolution empirical_transform(DriverPath path, double coefficient = 2.0);

/// |dM/dt + c M dM/dz| at (z, t) by centered differences with step h in both
/// variables. h defaults to 1e-4 * |z|. The caller keeps z away from the
/// support / branch cut by at least ~10 h.
double burgers_residual(const BurgersSolution& m, std::complex<double> z, double t,
                        double h = 0.0);

/// Checks that the inverse of w -> 1/M_t(w) drifts linearly:
/// |(1/M)^{-1}_{t2}(z) - (1/M)^{-1}_{t1}(z) - 2 (t2 - t1)/z|.
/// The inverse is found by Newton iteration started at w0 = z/2; z must sit
/// high enough in the cone for 1/M to be invertible there, otherwise Newton
/// fails and an error advises moving z higher.
double voiculescu_conservation(const BurgersSolution& m, std::complex<double> z,
                               double t1, double t2);

/// Residual of the rescaled family G_t(z) = c M_{c^2 t}(c z) in the same
/// transport equation; the family is closed under this rescaling.
double scaling_check(const BurgersSolution& m, double c, std::complex<double> z,
                     double t);

/// re_z,im_z,t,residual rows over the given evaluation points.
std::string residual_table_csv(const BurgersSolution& m,
                               std::span<const std::complex<double>> zs, double t,
                               double h = 0.0);

}  // namespace slitflow
