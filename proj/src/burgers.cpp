#include "slitflow/burgers.hpp"

#include <cmath>
#include <stdexcept>

#include "slitflow/csv.hpp"

namespace slitflow {

namespace {

std::complex<double> semicircle_family(std::complex<double> z, double t, double c) {
  // sqrt(z^2 - 8ct) = z * sqrt(1 - 8ct/z^2), principal branch of the factor
  const std::complex<double> root = z * std::sqrt(1.0 - 8.0 * c * t / (z * z));
  return 4.0 / (z + root);
}

}  // namespace

std::complex<double> semicircle_transform(std::complex<double> z, double t) {
  if (!(z.imag() > 0.0))
    throw std::invalid_argument("semicircle_transform: z must lie in the upper half-plane");
  return semicircle_family(z, t, 2.0);
}

BurgersSolution semicircle_solution(double coefficient) {
  BurgersSolution s;
  s.coefficient = coefficient;
  s.eval = [coefficient](std::complex<double> z, double t) {
    return semicircle_family(z, t, coefficient);
  };
  return s;
}

BurgersSolution frozen_transform(AtomicMeasure m, double coefficient) {
  BurgersSolution s;
  s.coefficient = coefficient;
  s.eval = [m = std::move(m)](std::complex<double> z, double) {
    return cauchy_transform(m, z);
  };
  return s;
}

BurgersSolution empirical_transform(DriverPath path, double coefficient) {
  BurgersSolution s;
  s.coefficient = coefficient;
  s.eval = [path = std::move(path)](std::complex<double> z, double t) {
    return path.transform_at(z, t);
  };
  return s;
}

double burgers_residual(const BurgersSolution& m, std::complex<double> z, double t,
                        double h) {
  if (h <= 0.0) h = 1e-4 * std::abs(z);
  const std::complex<double> dt =
      (m(z, t + h) - m(z, t - h)) / (2.0 * h);
  const std::complex<double> dz =
      (m(z + h, t) - m(z - h, t)) / (2.0 * h);
  return std::abs(dt + m.coefficient * m(z, t) * dz);
}

namespace {

// Solves 1/M_t(w) = z by Newton with a finite-difference derivative.
std::complex<double> invert_reciprocal(const BurgersSolution& m, double t,
                                       std::complex<double> z) {
  const auto f = [&](std::complex<double> w) { return 1.0 / m(w, t) - z; };
  std::complex<double> w = 0.5 * z;
  for (int it = 0; it < 80; ++it) {
    const std::complex<double> fw = f(w);
    if (std::abs(fw) < 1e-13 * (1.0 + std::abs(z))) return w;
    const double hw = 1e-6 * (1.0 + std::abs(w));
    const std::complex<double> df = (f(w + hw) - f(w - hw)) / (2.0 * hw);
    if (std::abs(df) < 1e-300)
      throw std::runtime_error("voiculescu_conservation: flat derivative in Newton");
    const std::complex<double> wn = w - fw / df;
    if (!(wn.imag() > 0.0))
      throw std::runtime_error(
          "voiculescu_conservation: Newton left the upper half-plane; move z "
          "higher in the cone");
    w = wn;
  }
  throw std::runtime_error(
      "voiculescu_conservation: Newton did not converge; move z higher in the cone");
}

}  // namespace

double voiculescu_conservation(const BurgersSolution& m, std::complex<double> z,
                               double t1, double t2) {
  if (!(z.imag() > 0.0))
    throw std::invalid_argument("voiculescu_conservation: z must lie in the upper half-plane");
  const std::complex<double> w1 = invert_reciprocal(m, t1, z);
  const std::complex<double> w2 = invert_reciprocal(m, t2, z);
  return std::abs(w2 - w1 - 2.0 * (t2 - t1) / z);
}

double scaling_check(const BurgersSolution& m, double c, std::complex<double> z,
                     double t) {
  if (c <= 0.0) throw std::invalid_argument("scaling_check: c must be positive");
  BurgersSolution scaled;
  scaled.coefficient = m.coefficient;
  scaled.eval = [&m, c](std::complex<double> w, double s) {
    return c * m(c * w, c * c * s);
  };
  return burgers_residual(scaled, z, t);
}

std::string residual_table_csv(const BurgersSolution& m,
                               std::span<const std::complex<double>> zs, double t,
                               double h) {
  std::string out = "re_z,im_z,t,residual\n";
  for (const auto& z : zs)
    out += fmt17(z.real()) + "," + fmt17(z.imag()) + "," + fmt17(t) + "," +
           fmt17(burgers_residual(m, z, t, h)) + "\n";
  return out;
}

}  // namespace slitflow
