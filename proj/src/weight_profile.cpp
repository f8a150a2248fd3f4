#include "slitflow/weight_profile.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace slitflow {

WeightProfile::WeightProfile(std::vector<Knot> knots) : knots_(std::move(knots)) {
  if (knots_.size() < 2) throw std::invalid_argument("WeightProfile: need >= 2 knots");
  if (std::abs(knots_.front().u) > 1e-15 || std::abs(knots_.front().value) > 1e-12 ||
      std::abs(knots_.back().u - 1.0) > 1e-15 || std::abs(knots_.back().value - 1.0) > 1e-12)
    throw std::invalid_argument("WeightProfile: must run from (0,0) to (1,1)");
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    if (knots_[i].u <= knots_[i - 1].u)
      throw std::invalid_argument("WeightProfile: knots not strictly increasing in u");
    if (knots_[i].value < knots_[i - 1].value - 1e-15)
      throw std::invalid_argument("WeightProfile: profile must be nondecreasing");
  }
  knots_.front() = {0.0, 0.0};
  knots_.back() = {1.0, 1.0};
}

WeightProfile WeightProfile::identity() {
  return WeightProfile({{0.0, 0.0}, {1.0, 1.0}});
}

WeightProfile WeightProfile::from_weights(std::span<const double> lambdas) {
  if (lambdas.empty()) throw std::invalid_argument("from_weights: empty weights");
  const double n = static_cast<double>(lambdas.size());
  std::vector<Knot> knots;
  knots.reserve(lambdas.size() + 1);
  knots.push_back({0.0, 0.0});
  double cum = 0.0;
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    cum += lambdas[k];
    knots.push_back({static_cast<double>(k + 1) / n, cum});
  }
  if (std::abs(cum - 1.0) > 1e-12)
    throw std::invalid_argument("from_weights: weights must sum to 1");
  knots.back().value = 1.0;
  return WeightProfile(std::move(knots));
}

WeightProfile WeightProfile::from_knots(std::vector<Knot> knots) {
  return WeightProfile(std::move(knots));
}

double WeightProfile::operator()(double u) const {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const auto it = std::upper_bound(
      knots_.begin(), knots_.end(), u,
      [](double x, const Knot& k) { return x < k.u; });
  const Knot& hi = *it;
  const Knot& lo = *(it - 1);
  const double s = (u - lo.u) / (hi.u - lo.u);
  return lo.value + s * (hi.value - lo.value);
}

AtomicMeasure compose_profile(const WeightProfile& L, const AtomicMeasure& m) {
  if (!m.is_probability())
    throw std::invalid_argument("compose_profile: m must be a probability measure");
  std::vector<AtomicMeasure::Atom> atoms;
  atoms.reserve(m.size());
  double cum = 0.0;
  double prev = L(0.0);
  for (const auto& a : m.atoms()) {
    cum += a.weight;
    const double next = L(cum);
    atoms.push_back({a.position, next - prev});
    prev = next;
  }
  return AtomicMeasure::probability(std::move(atoms));
}

AssumptionReport check_assumptions(std::span<const double> lambdas,
                                   std::span<const double> positions) {
  if (lambdas.size() != positions.size() || lambdas.empty())
    throw std::invalid_argument("check_assumptions: size mismatch");
  AssumptionReport r;
  r.n = lambdas.size();
  r.max_weight = *std::max_element(lambdas.begin(), lambdas.end());
  r.c_estimate = static_cast<double>(r.n) * r.max_weight;
  double phi = 0.0;
  for (double x : positions) phi += std::sqrt(1.0 + x * x);
  r.phi_moment = phi / static_cast<double>(r.n);
  return r;
}

namespace {

std::complex<double> integrate(const AtomicMeasure& m, const TestFunction& f) {
  std::complex<double> s = 0.0;
  for (const auto& a : m.atoms()) s += a.weight * f.f(a.position);
  return s;
}

}  // namespace

double mckean_residual(std::span<const AtomicMeasure> mu_path,
                       std::span<const AtomicMeasure> alpha_path,
                       std::span<const double> times, const TestFunction& f,
                       double t) {
  if (mu_path.size() != times.size() || alpha_path.size() != times.size())
    throw std::invalid_argument("mckean_residual: path/time size mismatch");
  if (times.size() < 3) throw std::invalid_argument("mckean_residual: need >= 3 samples");
  const double dt = times[1] - times[0];
  const auto it = std::min_element(times.begin(), times.end(), [t](double a, double b) {
    return std::abs(a - t) < std::abs(b - t);
  });
  const std::size_t i = static_cast<std::size_t>(it - times.begin());
  if (std::abs(*it - t) > 1e-9 * (1.0 + std::abs(t)))
    throw std::invalid_argument("mckean_residual: t not on the sampled grid");
  if (i == 0 || i + 1 == times.size())
    throw std::invalid_argument("mckean_residual: t needs interior neighbours");

  const std::complex<double> lhs =
      (integrate(alpha_path[i + 1], f) - integrate(alpha_path[i - 1], f)) / (2.0 * dt);

  std::complex<double> rhs = 0.0;
  for (const auto& ax : alpha_path[i].atoms()) {
    for (const auto& my : mu_path[i].atoms()) {
      const double gap = ax.position - my.position;
      const std::complex<double> kernel =
          std::abs(gap) <= 1e-12 * (1.0 + std::abs(ax.position))
              ? f.ddf(ax.position)
              : (f.df(ax.position) - f.df(my.position)) / gap;
      rhs += 2.0 * ax.weight * my.weight * kernel;
    }
  }
  return std::abs(lhs - rhs);
}

}  // namespace slitflow
