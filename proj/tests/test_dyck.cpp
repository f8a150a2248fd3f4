#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <set>

#include "slitflow/dyck.hpp"
#include "slitflow/rng.hpp"

using namespace slitflow;

TEST_CASE("catalan numbers, exact and log-space") {
  CHECK(catalan(1).to_string() == "1");
  CHECK(catalan(2).to_string() == "2");
  CHECK(catalan(5).to_string() == "42");
  CHECK(catalan(10).to_string() == "16796");
  CHECK(catalan(30).to_string() == "3814986502092304");
  CHECK(catalan(100).to_string() ==
        "896519947090131496687170070074100632420837521538745909320");
  const std::string c500 = catalan(500).to_string();
  CHECK(c500.size() == 297);
  CHECK(c500.substr(0, 30) == "539497486917039060909410566119");
  CHECK(c500.substr(c500.size() - 10) == "3293056320");
  CHECK(catalan_log(200) == doctest::Approx(268.7334186903714).epsilon(1e-12));
  CHECK(catalan_log(10) == doctest::Approx(std::log(16796.0)).epsilon(1e-12));
  CHECK_THROWS_AS(catalan(0), std::invalid_argument);
}

TEST_CASE("encode maps pairings to slope words") {
  Configuration side_by_side{{{1, 2}, {3, 4}}};
  CHECK(encode(side_by_side).slopes == std::vector<int>{1, -1, 1, -1});
  Configuration nested{{{1, 4}, {2, 3}}};
  CHECK(encode(nested).slopes == std::vector<int>{1, 1, -1, -1});

  CHECK_THROWS_AS(encode(Configuration{{{1, 3}, {2, 4}}}), std::invalid_argument);  // crossing
  CHECK_THROWS_AS(encode(Configuration{{{1, 2}, {2, 3}}}), std::invalid_argument);  // reuse
}

TEST_CASE("decode rejects invalid slope words") {
  CHECK_THROWS_AS(decode(DyckPath{{1, -1, -1, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(decode(DyckPath{{1, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(decode(DyckPath{{1, -1, 1}}), std::invalid_argument);
}

TEST_CASE("encode and decode invert each other") {
  // exhaustively for small sizes; the path count matches the Catalan number
  for (int n = 1; n <= 8; ++n) {
    const auto paths = enumerate_paths(n);
    CHECK(BigUint(paths.size()) == catalan(n));
    std::set<std::vector<int>> seen;
    for (const auto& p : paths) {
      const Configuration c = decode(p);
      c.validate();
      CHECK(encode(c) == p);
      seen.insert(p.slopes);
    }
    CHECK(seen.size() == paths.size());
  }
  // and on random large paths
  CounterRng rng(99, 0);
  for (int i = 0; i < 10000; ++i) {
    const DyckPath p = sample_uniform(100, rng);
    REQUIRE(p.valid());
    CHECK(encode(decode(p)) == p);
  }
}

TEST_CASE("uniform sampling") {
  CHECK(sample_uniform(1, 7).slopes == std::vector<int>{1, -1});

  SUBCASE("two paths of size 2 appear half the time") {
    CounterRng rng(1234, 0);
    int nested = 0;
    const int samples = 100000;
    for (int i = 0; i < samples; ++i)
      if (sample_uniform(2, rng).slopes[1] == 1) ++nested;
    CHECK(std::abs(nested / static_cast<double>(samples) - 0.5) < 0.01);
  }

  SUBCASE("all 1430 paths of size 8 appear with balanced frequencies") {
    // a max/min ratio below 1.5 needs ~700 hits per path: Poisson spread at
    // 1e5 samples (70 per path) would already exceed it
    CounterRng rng(4321, 0);
    std::map<std::vector<int>, int> counts;
    const int samples = 1000000;
    for (int i = 0; i < samples; ++i) counts[sample_uniform(8, rng).slopes]++;
    CHECK(counts.size() == 1430);
    int lo = samples, hi = 0;
    for (const auto& [_, c] : counts) {
      lo = std::min(lo, c);
      hi = std::max(hi, c);
    }
    CHECK(static_cast<double>(hi) / lo < 1.5);
  }
}

TEST_CASE("normalized paths") {
  const DyckPath tent{{1, -1}};
  const std::vector<double> breakpoints{0.0, 0.5, 1.0};

  SUBCASE("gamma = 1 reproduces the unit tent") {
    const NormalizedPath np = normalize(tent, breakpoints, 1.0);
    CHECK(np.value(0.5) == doctest::Approx(1.0));
    CHECK(np.value(0.25) == doctest::Approx(0.5));
    CHECK(np.values.back() == doctest::Approx(0.0));
    CHECK(np.max_value() == doctest::Approx(1.0));
  }

  SUBCASE("gamma = 1 with uniform breakpoints always closes at zero") {
    CounterRng rng(5, 0);
    const int n = 40;
    std::vector<double> uniform(2 * n + 1);
    for (int k = 0; k <= 2 * n; ++k) uniform[k] = static_cast<double>(k) / (2 * n);
    for (int i = 0; i < 50; ++i) {
      const NormalizedPath np = normalize(sample_uniform(n, rng), uniform, 1.0);
      CHECK(std::abs(np.values.back()) <= 1e-12);
      for (double v : np.values) CHECK(v >= -1e-12);
    }
  }

  SUBCASE("gamma = 1/2 at N = 500 reproduces the excursion maximum scale") {
    // Monte Carlo oracle: the mean maximum sits near sqrt(pi/2) with a
    // -3/(2 sqrt(2N)) finite-size correction, about 1.206 at N = 500
    CounterRng rng(2718, 0);
    const int n = 500;
    std::vector<double> uniform(2 * n + 1);
    for (int k = 0; k <= 2 * n; ++k) uniform[k] = static_cast<double>(k) / (2 * n);
    double mean = 0.0;
    const int samples = 10000;
    for (int i = 0; i < samples; ++i)
      mean += normalize(sample_uniform(n, rng), uniform, 0.5).max_value();
    mean /= samples;
    CHECK(mean >= 1.20);
    CHECK(mean <= 1.31);
  }

  SUBCASE("input validation") {
    CHECK_THROWS_AS(normalize(tent, std::vector<double>{0.0, 1.0}, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(normalize(tent, std::vector<double>{0.1, 0.5, 1.0}, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(normalize(DyckPath{{1, 1}}, breakpoints, 1.0),
                    std::invalid_argument);
  }
}

TEST_CASE("partition weights") {
  // kappa = 2 gives exponent -2b = -2: |2 - 0|^-2 = 1/4
  CHECK(partition_weight_pair(0.0, 2.0, 2.0) == doctest::Approx(0.25));
  CHECK_THROWS_AS(partition_weight_pair(1.0, 1.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(partition_weight_pair(0.0, 1.0, 5.0), std::invalid_argument);

  const std::vector<double> two{0.0, 1.0};
  CHECK(partition_weight_to_infinity(two, 2.0) == doctest::Approx(1.0));
  const std::vector<double> three{0.0, 1.0, 3.0};
  CHECK(partition_weight_to_infinity(three, 2.0) == doctest::Approx(6.0));
  CHECK_THROWS_AS(partition_weight_to_infinity(std::vector<double>{1.0, 1.0}, 2.0),
                  std::invalid_argument);

  SUBCASE("translation invariance") {
    // integer data stays bit-exact; generic data matches to rounding
    const std::vector<double> ints{-3.0, 0.0, 2.0, 7.0};
    std::vector<double> shifted = ints;
    for (double& x : shifted) x += 11.0;
    CHECK(partition_weight_to_infinity(ints, 2.0) ==
          partition_weight_to_infinity(shifted, 2.0));

    CounterRng rng(8, 0);
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<double> xs;
      for (int i = 0; i < 5; ++i) xs.push_back(4.0 * rng.next_unit());
      std::vector<double> ys = xs;
      for (double& x : ys) x += 0.75;
      const double a = partition_weight_to_infinity(xs, 3.0);
      const double b = partition_weight_to_infinity(ys, 3.0);
      CHECK(a == doctest::Approx(b).epsilon(1e-12));
    }
  }

  SUBCASE("scaling covariance") {
    CounterRng rng(9, 0);
    const double kappa = 2.5;
    for (double c : {0.5, 2.0, 3.7}) {
      std::vector<double> xs;
      for (int i = 0; i < 6; ++i) xs.push_back(3.0 * rng.next_unit() + i);
      std::vector<double> ys = xs;
      for (double& x : ys) x *= c;
      const double expected = partition_weight_to_infinity(xs, kappa) *
                              std::pow(c, (2.0 / kappa) * 6.0 * 5.0 / 2.0);
      CHECK(partition_weight_to_infinity(ys, kappa) ==
            doctest::Approx(expected).epsilon(1e-10));
    }
  }
}

TEST_CASE("configuration probabilities") {
  const std::vector<double> uniform{1.0, 1.0};
  const auto p = configuration_probabilities(uniform);
  CHECK(p[0] == doctest::Approx(0.5));
  CHECK(p[1] == doctest::Approx(0.5));

  const std::vector<double> skew{1.0, 3.0};
  const auto q = configuration_probabilities(skew);
  CHECK(q[0] == doctest::Approx(0.25));
  CHECK(q[1] == doctest::Approx(0.75));

  // two-curve partition weights feed straight in
  const double h1 = partition_weight_pair(0.0, 1.0, 3.0);
  const double h2 = partition_weight_pair(0.0, 2.5, 3.0);
  const auto ising = configuration_probabilities(std::vector<double>{h1, h2});
  CHECK(ising[0] == doctest::Approx(h1 / (h1 + h2)));

  CHECK_THROWS_AS(configuration_probabilities(std::vector<double>{0.0, 0.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(configuration_probabilities(std::vector<double>{-1.0, 2.0}),
                  std::invalid_argument);
}

TEST_CASE("path csv") {
  const std::string csv = DyckPath{{1, 1, -1, -1}}.csv();
  CHECK(csv == "k,d\n0,0\n1,1\n2,2\n3,1\n4,0\n");
  const Configuration c = decode(DyckPath{{1, 1, -1, -1}});
  CHECK(c.json() == "[[1,4],[2,3]]");
}
