#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "slitflow/atomic_measure.hpp"
#include "slitflow/burgers.hpp"
#include "slitflow/drivers.hpp"
#include "slitflow/rng.hpp"
#include "slitflow/scenarios.hpp"
#include "slitflow/weight_profile.hpp"

using namespace slitflow;
using complexd = std::complex<double>;

namespace {

AtomicMeasure two_point(double x0, double w0, double x1, double w1) {
  return AtomicMeasure::probability({{x0, w0}, {x1, w1}});
}

AtomicMeasure random_probability(CounterRng& rng, int n) {
  std::vector<AtomicMeasure::Atom> atoms(n);
  double sum = 0.0;
  for (auto& a : atoms) {
    a.position = 10.0 * rng.next_unit() - 5.0;
    a.weight = rng.next_unit() + 0.01;
    sum += a.weight;
  }
  for (auto& a : atoms) a.weight /= sum;
  return AtomicMeasure::probability(std::move(atoms));
}

}  // namespace

TEST_CASE("construction sorts, merges and validates") {
  const AtomicMeasure m =
      AtomicMeasure::probability({{1.0, 0.25}, {-1.0, 0.25}, {1.0 + 1e-15, 0.5}});
  CHECK(m.size() == 2);  // the two atoms at ~1 merge
  CHECK(m.atoms()[0].position == -1.0);
  CHECK(m.atoms()[1].weight == doctest::Approx(0.75));
  CHECK(m.total_mass() == doctest::Approx(1.0));

  CHECK_THROWS_AS(AtomicMeasure::probability({{0.0, 0.5}}), std::invalid_argument);
  CHECK_THROWS_AS(AtomicMeasure::probability({{0.0, -1.0}, {1.0, 2.0}}),
                  std::invalid_argument);
  const AtomicMeasure s = AtomicMeasure::scaled({{0.0, 0.5}});
  CHECK(s.total_mass() == doctest::Approx(0.5));
  CHECK_FALSE(s.is_probability());
}

TEST_CASE("cdf is the right-continuous step function") {
  const AtomicMeasure delta = AtomicMeasure::point(0.0);
  CHECK(delta.cdf(-1.0) == 0.0);
  CHECK(delta.cdf(0.0) == 1.0);
  const AtomicMeasure pair = two_point(-1.0, 0.5, 1.0, 0.5);
  CHECK(pair.cdf(0.0) == doctest::Approx(0.5));
}

TEST_CASE("compose_profile with the identity is the identity") {
  CounterRng rng(5, 0);
  const AtomicMeasure m = random_probability(rng, 17);
  const AtomicMeasure composed = compose_profile(WeightProfile::identity(), m);
  REQUIRE(composed.size() == m.size());
  for (std::size_t k = 0; k < m.size(); ++k) {
    CHECK(composed.atoms()[k].position == m.atoms()[k].position);
    CHECK(composed.atoms()[k].weight ==
          doctest::Approx(m.atoms()[k].weight).epsilon(1e-14));
  }
}

TEST_CASE("compose_profile: L(u) = u^2 on two equal atoms") {
  // increments L(1/2) - L(0) = 1/4 and L(1) - L(1/2) = 3/4, by hand
  std::vector<WeightProfile::Knot> knots;
  for (int i = 0; i <= 64; ++i) {
    const double u = i / 64.0;
    knots.push_back({u, u * u});
  }
  const WeightProfile square = WeightProfile::from_knots(std::move(knots));
  const AtomicMeasure m = two_point(0.0, 0.5, 1.0, 0.5);
  const AtomicMeasure composed = compose_profile(square, m);
  CHECK(composed.atoms()[0].weight == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(composed.atoms()[1].weight == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("compose_profile rebuilds the weighted measure from the empirical one") {
  // the cumulative-weight profile applied to equal atoms returns the weights
  const ScenarioConfig cfg = builtin("prince_charles", {.n = 16});
  const WeightProfile profile = WeightProfile::from_weights(cfg.weights);
  const AtomicMeasure alpha = AtomicMeasure::empirical(cfg.positions);
  const AtomicMeasure mu = compose_profile(profile, alpha);
  REQUIRE(mu.size() == cfg.weights.size());
  for (std::size_t k = 0; k < mu.size(); ++k)
    CHECK(std::abs(mu.atoms()[k].weight - cfg.weights[k]) <= 1e-14);
  // and the composed cdf is L o G at every atom
  double cum = 0.0;
  for (std::size_t k = 0; k < alpha.size(); ++k) {
    cum += alpha.atoms()[k].weight;
    CHECK(mu.cdf(alpha.atoms()[k].position) ==
          doctest::Approx(profile(cum)).epsilon(1e-13));
  }
}

TEST_CASE("cauchy transform point values") {
  const AtomicMeasure delta = AtomicMeasure::point(0.0);
  const complexd at_i = cauchy_transform(delta, {0.0, 1.0});
  CHECK(at_i.real() == doctest::Approx(0.0));
  CHECK(at_i.imag() == doctest::Approx(-2.0));

  const AtomicMeasure pair = two_point(-1.0, 0.5, 1.0, 0.5);
  const complexd at_2i = cauchy_transform(pair, {0.0, 2.0});
  CHECK(at_2i.real() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(at_2i.imag() == doctest::Approx(-0.8));

  CHECK_THROWS_AS(cauchy_transform(delta, {0.0, -1.0}), std::invalid_argument);
  CHECK_THROWS_AS(cauchy_transform(delta, {1.0, 0.0}), std::invalid_argument);
}

TEST_CASE("cauchy transform: negative imaginary part and tail normalization") {
  CounterRng rng(11, 0);
  for (int trial = 0; trial < 25; ++trial) {
    const AtomicMeasure m = random_probability(rng, 1 + static_cast<int>(rng.next_below(12)));
    const complexd z(6.0 * rng.next_unit() - 3.0, 0.05 + 3.0 * rng.next_unit());
    CHECK(cauchy_transform(m, z).imag() < 0.0);
    const double y = 1e6;
    CHECK(y * std::abs(cauchy_transform(m, {0.0, y})) == doctest::Approx(2.0).epsilon(1e-5));
  }
}

TEST_CASE("stieltjes inversion recovers densities") {
  // semicircle with variance 4: density at 0 is 1/(2 pi)
  const auto exact = [](complexd z) { return semicircle_transform(z, 1.0); };
  const double grid0[] = {0.0};
  const double rho_coarse = stieltjes_invert(exact, grid0, 1e-3)[0];
  const double rho_fine = stieltjes_invert(exact, grid0, 1e-4)[0];
  CHECK(rho_fine == doctest::Approx(1.0 / (2.0 * std::numbers::pi)).epsilon(1e-3));
  // eps -> 0 moves the estimate toward the limit
  const double target = 1.0 / (2.0 * std::numbers::pi);
  CHECK(std::abs(rho_fine - target) < std::abs(rho_coarse - target));

  // Lorentzian peak of an atom: 1/(eps pi) at the atom
  const AtomicMeasure delta = AtomicMeasure::point(0.0);
  const double peak = stieltjes_invert(delta, grid0, 0.1)[0];
  CHECK(peak == doctest::Approx(1.0 / (0.1 * std::numbers::pi)).epsilon(1e-12));

  // outside the support the density estimate vanishes with eps
  const double grid_out[] = {4.5, -6.0};
  const auto rho_out = stieltjes_invert(exact, grid_out, 1e-5);
  CHECK(rho_out[0] < 1e-3);
  CHECK(rho_out[1] < 1e-3);
  CHECK_THROWS_AS(stieltjes_invert(delta, grid0, 0.0), std::invalid_argument);
}

TEST_CASE("wasserstein distance: point values and metric axioms") {
  const AtomicMeasure d0 = AtomicMeasure::point(0.0);
  const AtomicMeasure d1 = AtomicMeasure::point(1.0);
  CHECK(wasserstein1(d0, d1) == doctest::Approx(1.0));
  CHECK(wasserstein1(d0, d0) == 0.0);
  CHECK(wasserstein1(two_point(0.0, 0.5, 2.0, 0.5), d1) == doctest::Approx(1.0));

  CounterRng rng(23, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const AtomicMeasure a = random_probability(rng, 5);
    const AtomicMeasure b = random_probability(rng, 7);
    const AtomicMeasure c = random_probability(rng, 4);
    const double ab = wasserstein1(a, b), ba = wasserstein1(b, a);
    CHECK(ab == doctest::Approx(ba).epsilon(1e-15));
    CHECK(wasserstein1(a, c) <= ab + wasserstein1(b, c) + 1e-12);
    CHECK(ab >= 0.0);
  }
}

TEST_CASE("assumption report") {
  const std::vector<double> uniform(8, 1.0 / 8.0);
  const std::vector<double> pos{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};
  const AssumptionReport r = check_assumptions(uniform, pos);
  CHECK(r.c_estimate == doctest::Approx(1.0));
  CHECK(r.phi_moment <= std::sqrt(2.0) + 1e-12);
  CHECK(r.phi_moment >= 1.0);

  // the mass-1/2 outlier family: the constant grows like N/2
  for (int n : {10, 40}) {
    const ScenarioConfig j = builtin("johnny", {.n = n});
    const AssumptionReport rj = check_assumptions(j.weights, j.positions);
    CHECK(rj.c_estimate == doctest::Approx(n / 2.0));
  }
}

TEST_CASE("evolution-identity residual") {
  const TestFunction quadratic{
      [](double x) { return complexd(x * x, 0.0); },
      [](double x) { return complexd(2.0 * x, 0.0); },
      [](double) { return complexd(2.0, 0.0); }};

  SUBCASE("constant paths have zero time derivative") {
    const AtomicMeasure m = two_point(-1.0, 0.5, 1.0, 0.5);
    const std::vector<AtomicMeasure> path(5, m);
    const std::vector<double> times{0.0, 0.1, 0.2, 0.3, 0.4};
    // lhs = 0, so the residual equals |rhs| = |2 * sum lambda_x lambda_y kernel|
    double rhs = 0.0;
    for (const auto& ax : m.atoms())
      for (const auto& ay : m.atoms()) {
        const double kernel = ax.position == ay.position
                                  ? 2.0
                                  : (2.0 * ax.position - 2.0 * ay.position) /
                                        (ax.position - ay.position);
        rhs += 2.0 * ax.weight * ay.weight * kernel;
      }
    const double res = mckean_residual(path, path, times, quadratic, 0.2);
    CHECK(res == doctest::Approx(std::abs(rhs)).epsilon(1e-12));
  }

  SUBCASE("static single particle with flat test function") {
    // f'(0) = f''(0) = 0 makes both sides vanish
    const TestFunction cubic{
        [](double x) { return complexd(std::pow(std::tanh(x), 3), 0.0); },
        [](double x) {
          const double th = std::tanh(x), sh = 1.0 / std::cosh(x);
          return complexd(3.0 * th * th * sh * sh, 0.0);
        },
        [](double x) {
          const double th = std::tanh(x), sh = 1.0 / std::cosh(x);
          return complexd(6.0 * th * sh * sh * (sh * sh - th * th), 0.0);
        }};
    const std::vector<AtomicMeasure> path(3, AtomicMeasure::point(0.0));
    const std::vector<double> times{0.0, 0.1, 0.2};
    CHECK(mckean_residual(path, path, times, cubic, 0.1) <= 1e-12);
  }

  SUBCASE("equal-speed flow satisfies the identity as N grows") {
    const complexd z(0.0, 2.0);
    const TestFunction resolvent{
        [z](double x) { return 2.0 / (z - x); },
        [z](double x) { return 2.0 / ((z - x) * (z - x)); },
        [z](double x) { return 4.0 / ((z - x) * (z - x) * (z - x)); }};
    const auto residual_at = [&](int n) {
      ScenarioOverrides o;
      o.n = n;
      o.horizon = 0.2;
      o.dt = 1e-3;
      const DriverPath path = simulate(builtin("semicircle", o).driver_config());
      std::vector<AtomicMeasure> mu, alpha;
      std::vector<double> times;
      for (std::size_t i = 0; i < path.times.size(); ++i) {
        times.push_back(path.times[i]);
        mu.push_back(path.measure_at(path.times[i]));
        alpha.push_back(path.empirical_at(path.times[i]));
      }
      return mckean_residual(mu, alpha, times, resolvent, 0.1);
    };
    const double r50 = residual_at(50);
    const double r200 = residual_at(200);
    CHECK(r200 < r50);
    CHECK(r200 <= 0.02);
  }
}

TEST_CASE("csv emitters use full precision and ascending order") {
  const AtomicMeasure m = two_point(-0.1, 0.25, 0.3, 0.75);
  const std::string csv = m.to_csv();
  CHECK(csv.find("position,weight\n") == 0);
  CHECK(csv.find("-0.1") != std::string::npos);
  const std::string table = m.cdf_table_csv();
  CHECK(table.find("x,F\n") == 0);
  CHECK(table.find(",1\n") != std::string::npos);
}
