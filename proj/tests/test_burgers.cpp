#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <algorithm>
#include <vector>

#include "slitflow/atomic_measure.hpp"
#include "slitflow/burgers.hpp"
#include "slitflow/drivers.hpp"
#include "slitflow/scenarios.hpp"

using namespace slitflow;
using complexd = std::complex<double>;

TEST_CASE("semicircle transform point values and branch") {
  // 4/(2i + 2 sqrt(2) i) = -2i/(1 + sqrt(2))
  const complexd v = semicircle_transform({0.0, 2.0}, 0.25);
  CHECK(v.real() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(v.imag() == doctest::Approx(-2.0 / (1.0 + std::sqrt(2.0))));

  // t = 0 collapses to the point-mass transform 2/z
  for (const complexd z : {complexd{0.3, 1.0}, complexd{-2.0, 0.5}}) {
    const complexd m0 = semicircle_transform(z, 0.0);
    CHECK(std::abs(m0 - 2.0 / z) <= 1e-14);
  }

  // tail normalization and half-plane mapping
  const complexd tail = semicircle_transform({0.0, 1e6}, 1.0);
  CHECK(std::abs(tail - 2.0 / complexd{0.0, 1e6}) <= 1e-16);
  for (double x : {-3.9, -1.0, 0.7, 3.9})
    for (double y : {0.05, 0.5, 2.0})
      CHECK(semicircle_transform({x, y}, 1.0).imag() < 0.0);

  CHECK_THROWS_AS(semicircle_transform({0.0, -1.0}, 1.0), std::invalid_argument);
}

TEST_CASE("transport-equation residual of the exact solution") {
  const BurgersSolution exact = semicircle_solution(2.0);
  CHECK(burgers_residual(exact, {0.0, 2.0}, 0.25, 1e-4) <= 1e-6);

  // centered differences converge at second order until rounding kicks in
  const double r1 = burgers_residual(exact, {0.3, 2.0}, 0.3, 4e-2);
  const double r2 = burgers_residual(exact, {0.3, 2.0}, 0.3, 2e-2);
  const double r4 = burgers_residual(exact, {0.3, 2.0}, 0.3, 1e-2);
  CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.15));
  CHECK(r2 / r4 == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("a frozen transform does not solve the transport equation") {
  const AtomicMeasure m = AtomicMeasure::probability({{-1.0, 0.5}, {1.0, 0.5}});
  const BurgersSolution frozen = frozen_transform(m);
  CHECK(burgers_residual(frozen, {0.0, 1.5}, 0.5) > 0.01);
}

TEST_CASE("reciprocal-inverse drift is linear in t") {
  const BurgersSolution exact = semicircle_solution(2.0);
  CHECK(voiculescu_conservation(exact, {0.0, 20.0}, 0.5, 0.5) == 0.0);
  CHECK(voiculescu_conservation(exact, {0.0, 20.0}, 0.0, 1.0) <= 1e-8);
  CHECK(voiculescu_conservation(exact, {3.0, 25.0}, 0.2, 0.8) <= 1e-8);
}

TEST_CASE("reciprocal-inverse drift of the empirical transform shrinks with N") {
  const auto deviation = [](int n) {
    ScenarioOverrides o;
    o.n = n;
    o.horizon = 0.25;
    o.dt = 1e-3;
    const DriverPath path = simulate(builtin("semicircle", o).driver_config());
    return voiculescu_conservation(empirical_transform(path), {0.0, 20.0}, 0.0, 0.25);
  };
  const double d50 = deviation(50);
  const double d200 = deviation(200);
  CHECK(d200 < d50);
  CHECK(d200 <= 1e-3);
}

TEST_CASE("rescaled family stays a solution") {
  const BurgersSolution exact = semicircle_solution(2.0);
  // c = 1 reduces to the plain residual
  CHECK(scaling_check(exact, 1.0, {0.0, 2.0}, 0.25) ==
        doctest::Approx(burgers_residual(exact, {0.0, 2.0}, 0.25)).epsilon(1e-12));
  for (double c : {0.5, 2.0, 7.0})
    CHECK(scaling_check(exact, c, {0.4, 1.8}, 0.2) <= 1e-5);
}

TEST_CASE("long-time behaviour: any compact start flattens into the semicircle") {
  // start from the uniform measure on [-1, 1] and run to time c^2 T
  const int n = 200;
  const double c = 100.0, horizon = 0.5;
  DriverConfig cfg;
  cfg.kind = DriverKind::simultaneous;
  for (int k = 1; k <= n; ++k)
    cfg.initial_positions.push_back(-1.0 + 2.0 * (k - 0.5) / n);
  cfg.lambdas.assign(n, 1.0 / n);
  cfg.horizon = c * c * horizon;
  cfg.dt = 0.5;
  const DriverPath path = simulate(cfg);
  const complexd z(0.0, 4.0);
  const complexd rescaled = c * path.transform_at(c * z, c * c * horizon);
  CHECK(std::abs(rescaled - semicircle_transform(z, horizon)) <= 1e-3);
}

TEST_CASE("characteristic lines of the coefficient-1 family") {
  const BurgersSolution family = semicircle_solution(1.0);
  for (const complexd z : {complexd{0.0, 2.0}, complexd{1.0, 1.5}, complexd{-2.0, 3.0}})
    for (double t : {0.1, 0.5, 1.0}) {
      const complexd m0 = family(z, 0.0);
      CHECK(std::abs(family(z + t * m0, t) - m0) <= 1e-8);
    }
}

TEST_CASE("reconstructed density integrates back to the transform") {
  // Poisson-smoothed density from the inversion, re-integrated at z = 3i
  const auto exact = [](complexd z) { return semicircle_transform(z, 1.0); };
  const double eps = 1e-4;
  const double h = 2e-5;
  std::vector<double> grid;
  for (double x = -8.0; x <= 8.0; x += h) grid.push_back(x);
  const std::vector<double> rho = stieltjes_invert(exact, grid, eps);
  std::vector<AtomicMeasure::Atom> atoms;
  atoms.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (rho[i] > 0.0) atoms.push_back({grid[i], rho[i] * h});
  const AtomicMeasure reconstructed = AtomicMeasure::scaled(std::move(atoms));
  CHECK(reconstructed.total_mass() == doctest::Approx(1.0).epsilon(1e-3));
  const complexd z(0.0, 3.0);
  CHECK(std::abs(cauchy_transform(reconstructed, z) - semicircle_transform(z, 1.0)) <=
        1e-4);
}

TEST_CASE("residual table csv") {
  const BurgersSolution exact = semicircle_solution(2.0);
  const std::vector<complexd> zs{{0.0, 2.0}, {1.0, 1.5}};
  const std::string csv = residual_table_csv(exact, zs, 0.25);
  CHECK(csv.rfind("re_z,im_z,t,residual\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  CHECK(csv.find("0.25") != std::string::npos);
}

TEST_CASE("support grows monotonically in t") {
  const double eps = 1e-4;
  std::vector<double> grid;
  for (double x = -9.0; x <= 9.0; x += 1e-3) grid.push_back(x);
  double prev_left = 0.0, prev_right = 0.0;
  for (double t : {0.25, 0.5, 1.0, 2.0}) {
    const auto m = [t](complexd z) { return semicircle_transform(z, t); };
    const std::vector<double> rho = stieltjes_invert(m, grid, eps);
    double left = 9.0, right = -9.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (rho[i] > 1e-2) {
        left = std::min(left, grid[i]);
        right = std::max(right, grid[i]);
      }
    }
    CHECK(left == doctest::Approx(-4.0 * std::sqrt(t)).epsilon(0.02));
    CHECK(right == doctest::Approx(4.0 * std::sqrt(t)).epsilon(0.02));
    CHECK(left <= prev_left);
    CHECK(right >= prev_right);
    prev_left = left;
    prev_right = right;
  }
}
