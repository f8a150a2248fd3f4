#include "slitflow/dyck.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "slitflow/csv.hpp"

namespace slitflow {

namespace {
constexpr std::uint32_t kBase = 1000000000u;
}

BigUint::BigUint(std::uint64_t v) {
  do {
    limbs_.push_back(static_cast<std::uint32_t>(v % kBase));
    v /= kBase;
  } while (v != 0);
}

BigUint& BigUint::mul_small(std::uint64_t m) {
  std::uint64_t carry = 0;
  for (auto& limb : limbs_) {
    const std::uint64_t cur = static_cast<std::uint64_t>(limb) * m + carry;
    limb = static_cast<std::uint32_t>(cur % kBase);
    carry = cur / kBase;
  }
  while (carry != 0) {
    limbs_.push_back(static_cast<std::uint32_t>(carry % kBase));
    carry /= kBase;
  }
  return *this;
}

BigUint& BigUint::div_small_exact(std::uint64_t d) {
  std::uint64_t rem = 0;
  for (std::size_t i = limbs_.size(); i-- > 0;) {
    const std::uint64_t cur = rem * kBase + limbs_[i];
    limbs_[i] = static_cast<std::uint32_t>(cur / d);
    rem = cur % d;
  }
  if (rem != 0) throw std::logic_error("BigUint: division left a remainder");
  while (limbs_.size() > 1 && limbs_.back() == 0) limbs_.pop_back();
  return *this;
}

std::string BigUint::to_string() const {
  std::string out = std::to_string(limbs_.back());
  char buf[16];
  for (std::size_t i = limbs_.size() - 1; i-- > 0;) {
    std::snprintf(buf, sizeof(buf), "%09u", limbs_[i]);
    out += buf;
  }
  return out;
}

double BigUint::to_double() const {
  double v = 0.0;
  for (std::size_t i = limbs_.size(); i-- > 0;) v = v * kBase + limbs_[i];
  return v;
}

BigUint catalan(int n) {
  if (n < 1) throw std::invalid_argument("catalan: n must be positive");
  BigUint c(1);
  for (int k = 2; k <= n; ++k) {
    // C_k = C_{k-1} * 2 (2k - 1) / (k + 1)
    c.mul_small(2ull * (2ull * k - 1));
    c.div_small_exact(static_cast<std::uint64_t>(k) + 1);
  }
  return c;
}

double catalan_log(int n) {
  if (n < 1) throw std::invalid_argument("catalan_log: n must be positive");
  return std::lgamma(2.0 * n + 1.0) - std::lgamma(n + 2.0) - std::lgamma(n + 1.0);
}

bool DyckPath::valid() const {
  if (slopes.empty() || slopes.size() % 2 != 0) return false;
  int height = 0;
  for (int s : slopes) {
    if (s != 1 && s != -1) return false;
    height += s;
    if (height < 0) return false;
  }
  return height == 0;
}

std::vector<int> DyckPath::heights() const {
  std::vector<int> d(slopes.size() + 1, 0);
  for (std::size_t k = 0; k < slopes.size(); ++k) d[k + 1] = d[k] + slopes[k];
  return d;
}

std::string DyckPath::csv() const {
  std::string out = "k,d\n";
  const auto d = heights();
  for (std::size_t k = 0; k < d.size(); ++k)
    out += std::to_string(k) + "," + std::to_string(d[k]) + "\n";
  return out;
}

void Configuration::validate() const {
  const int two_n = 2 * n();
  std::vector<int> used(two_n + 1, 0);
  for (const auto& [a, b] : pairs) {
    if (a < 1 || b <= a || b > two_n)
      throw std::invalid_argument("Configuration: pair indices out of range");
    used[a]++;
    used[b]++;
  }
  for (int i = 1; i <= two_n; ++i)
    if (used[i] != 1)
      throw std::invalid_argument("Configuration: indices must cover {1..2N} once");
  for (const auto& [a, b] : pairs)
    for (const auto& [c, d] : pairs)
      if (a < c && c < b && b < d)
        throw std::invalid_argument("Configuration: crossing chords");
}

DyckPath encode(const Configuration& config) {
  config.validate();
  DyckPath path;
  path.slopes.assign(2 * config.n(), 0);
  for (const auto& [a, b] : config.pairs) {
    path.slopes[a - 1] = 1;
    path.slopes[b - 1] = -1;
  }
  return path;
}

Configuration decode(const DyckPath& path) {
  if (!path.valid()) throw std::invalid_argument("decode: not a Dyck slope sequence");
  Configuration config;
  std::vector<int> open;
  for (std::size_t i = 0; i < path.slopes.size(); ++i) {
    if (path.slopes[i] == 1) {
      open.push_back(static_cast<int>(i) + 1);
    } else {
      config.pairs.emplace_back(open.back(), static_cast<int>(i) + 1);
      open.pop_back();
    }
  }
  std::sort(config.pairs.begin(), config.pairs.end());
  return config;
}

std::string Configuration::json() const {
  std::string out = "[";
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (i) out += ",";
    out += "[" + std::to_string(pairs[i].first) + "," + std::to_string(pairs[i].second) + "]";
  }
  return out + "]";
}

DyckPath sample_uniform(int n, CounterRng& rng) {
  if (n < 1) throw std::invalid_argument("sample_uniform: n must be positive");
  // word with n+1 rises and n falls; exactly one rotation stays positive
  std::vector<int> w(2 * n + 1, -1);
  std::fill(w.begin(), w.begin() + n + 1, 1);
  for (std::size_t i = w.size() - 1; i > 0; --i)
    std::swap(w[i], w[rng.next_below(i + 1)]);

  int sum = 0;
  int min_sum = 0;
  std::size_t min_pos = 0;  // last position attaining the minimum prefix sum
  for (std::size_t i = 0; i < w.size(); ++i) {
    sum += w[i];
    if (sum <= min_sum) {
      min_sum = sum;
      min_pos = i + 1;
    }
  }
  DyckPath path;
  path.slopes.reserve(2 * n);
  // rotation starting after min_pos begins with the discarded rise
  for (std::size_t i = 1; i < w.size(); ++i)
    path.slopes.push_back(w[(min_pos + i) % w.size()]);
  return path;
}

DyckPath sample_uniform(int n, std::uint64_t seed) {
  CounterRng rng(seed);
  return sample_uniform(n, rng);
}

namespace {

void enumerate_rec(int remaining_up, int height, std::vector<int>& slopes,
                   std::vector<DyckPath>& out) {
  if (remaining_up == 0 && height == 0) {
    out.push_back(DyckPath{slopes});
    return;
  }
  if (height > 0) {  // try the fall first: -1 < +1 lexicographically
    slopes.push_back(-1);
    enumerate_rec(remaining_up, height - 1, slopes, out);
    slopes.pop_back();
  }
  if (remaining_up > 0) {
    slopes.push_back(1);
    enumerate_rec(remaining_up - 1, height + 1, slopes, out);
    slopes.pop_back();
  }
}

}  // namespace

std::vector<DyckPath> enumerate_paths(int n) {
  if (n < 1) throw std::invalid_argument("enumerate_paths: n must be positive");
  std::vector<DyckPath> out;
  std::vector<int> slopes;
  enumerate_rec(n, 0, slopes, out);
  return out;
}

NormalizedPath normalize(const DyckPath& path, std::span<const double> breakpoints,
                         double gamma) {
  if (!path.valid()) throw std::invalid_argument("normalize: not a Dyck path");
  const std::size_t two_n = path.slopes.size();
  if (breakpoints.size() != two_n + 1)
    throw std::invalid_argument("normalize: need 2N+1 breakpoints");
  if (breakpoints[0] != 0.0)
    throw std::invalid_argument("normalize: breakpoints must start at 0");
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
    if (!(breakpoints[i] < breakpoints[i + 1]))
      throw std::invalid_argument("normalize: breakpoints must increase");
  if (breakpoints.back() > 1.0 + 1e-15)
    throw std::invalid_argument("normalize: breakpoints must stay within [0, 1]");

  NormalizedPath np;
  np.gamma = gamma;
  np.breakpoints.assign(breakpoints.begin(), breakpoints.end());
  np.values.assign(two_n + 1, 0.0);
  for (std::size_t k = 0; k < two_n; ++k) {
    const double gap = breakpoints[k + 1] - breakpoints[k];
    np.values[k + 1] = np.values[k] + path.slopes[k] * std::pow(gap, 1.0 - gamma);
  }
  return np;
}

double NormalizedPath::value(double t) const {
  if (t <= breakpoints.front()) return values.front();
  if (t >= breakpoints.back()) return values.back();
  const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - breakpoints.begin()) - 1;
  const double w = (t - breakpoints[i]) / (breakpoints[i + 1] - breakpoints[i]);
  return values[i] + w * (values[i + 1] - values[i]);
}

double NormalizedPath::max_value() const {
  return *std::max_element(values.begin(), values.end());
}

double partition_weight_pair(double x, double y, double kappa) {
  if (kappa <= 0.0 || kappa > 4.0)
    throw std::invalid_argument("partition_weight_pair: kappa must lie in (0, 4]");
  if (x == y) throw std::invalid_argument("partition_weight_pair: coincident points");
  const double b = (6.0 - kappa) / (2.0 * kappa);
  return std::pow(std::abs(y - x), -2.0 * b);
}

double partition_weight_to_infinity(std::span<const double> points, double kappa) {
  if (kappa <= 0.0 || kappa > 4.0)
    throw std::invalid_argument("partition_weight_to_infinity: kappa must lie in (0, 4]");
  std::vector<double> xs(points.begin(), points.end());
  std::sort(xs.begin(), xs.end());
  for (std::size_t i = 0; i + 1 < xs.size(); ++i)
    if (xs[i] == xs[i + 1])
      throw std::invalid_argument("partition_weight_to_infinity: coincident points");
  double w = 1.0;
  for (std::size_t j = 0; j < xs.size(); ++j)
    for (std::size_t k = j + 1; k < xs.size(); ++k)
      w *= std::pow(xs[k] - xs[j], 2.0 / kappa);
  return w;
}

std::vector<double> configuration_probabilities(std::span<const double> weights) {
  double sum = 0.0;
  for (double w : weights) {
    if (w < 0.0)
      throw std::invalid_argument("configuration_probabilities: negative weight");
    sum += w;
  }
  if (sum == 0.0)
    throw std::invalid_argument("configuration_probabilities: all weights are zero");
  std::vector<double> p(weights.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = weights[i] / sum;
  return p;
}

}  // namespace slitflow
