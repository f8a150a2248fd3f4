#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "slitflow/rng.hpp"

namespace slitflow {

/// Unsigned big integer, just enough for exact Catalan numbers.
class BigUint {
 public:
  BigUint() : limbs_{0} {}
  explicit BigUint(std::uint64_t v);

  BigUint& mul_small(std::uint64_t m);
  BigUint& div_small_exact(std::uint64_t d);  // throws if a remainder is left

  bool operator==(const BigUint& other) const = default;
  std::string to_string() const;
  double to_double() const;

 private:
  std::vector<std::uint32_t> limbs_;  // base 1e9, little-endian
};

/// Exact Catalan number, C_1 = 1, C_2 = 2, ... (exact well past n = 500).
BigUint catalan(int n);
/// log C_n for sizes where the exact value is not needed.
double catalan_log(int n);

/// Balanced +-1 slope sequence with nonnegative partial sums.
struct DyckPath {
  std::vector<int> slopes;

  int n() const { return static_cast<int>(slopes.size()) / 2; }
  bool valid() const;
  /// Heights d(0..2N), d(0) = d(2N) = 0.
  std::vector<int> heights() const;
  std::string csv() const;  // k,d
  bool operator==(const DyckPath&) const = default;
};

/// Non-crossing perfect pairing of {1, ..., 2N}; each pair (a, b) has a < b.
struct Configuration {
  std::vector<std::pair<int, int>> pairs;

  int n() const { return static_cast<int>(pairs.size()); }
  void validate() const;  // disjoint, covering, non-crossing
  std::string json() const;
  bool operator==(const Configuration&) const = default;
};

/// Chord pairing -> slope sequence: an opener contributes +1 at its left
/// index and -1 at its right index; nesting turns into consecutive equal
/// slopes.
DyckPath encode(const Configuration& config);
/// Inverse of encode; rejects slope sequences that are not balanced
/// nonnegative walks.
Configuration decode(const DyckPath& path);

/// Exactly uniform over the C_N paths via the cycle lemma: shuffle a word of
/// N+1 rises and N falls, rotate to its unique everywhere-positive conjugate,
/// drop the leading rise.
DyckPath sample_uniform(int n, CounterRng& rng);
DyckPath sample_uniform(int n, std::uint64_t seed);

/// All N-Dyck paths in lexicographic order (intended for small N).
std::vector<DyckPath> enumerate_paths(int n);

/// Piecewise-affine path on [0,1] with slopes rescaled by gap^(-gamma):
/// e(p_{k+1}) = e(p_k) + (p_{k+1} - p_k) * (d(k+1) - d(k)) / (p_{k+1} - p_k)^gamma.
struct NormalizedPath {
  std::vector<double> breakpoints;
  std::vector<double> values;
  double gamma = 1.0;

  double value(double t) const;
  double max_value() const;
};

NormalizedPath normalize(const DyckPath& path, std::span<const double> breakpoints,
                         double gamma);

/// |y - x|^(-2b) with b = (6 - kappa) / (2 kappa); kappa in (0, 4].
double partition_weight_pair(double x, double y, double kappa);
/// prod_{j < k} (x_k - x_j)^(2/kappa) over the sorted points.
double partition_weight_to_infinity(std::span<const double> points, double kappa);

/// Normalizes nonnegative configuration weights to probabilities.
std::vector<double> configuration_probabilities(std::span<const double> weights);

}  // namespace slitflow
