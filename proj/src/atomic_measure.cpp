#include "slitflow/atomic_measure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "slitflow/csv.hpp"

namespace slitflow {

namespace {
constexpr double kMergeGap = 1e-14;
constexpr double kMassTol = 1e-12;
}  // namespace

AtomicMeasure::AtomicMeasure(std::vector<Atom> atoms, bool probability)
    : probability_(probability) {
  for (const Atom& a : atoms) {
    if (!std::isfinite(a.position) || !std::isfinite(a.weight))
      throw std::invalid_argument("AtomicMeasure: non-finite atom");
    if (a.weight < 0.0)
      throw std::invalid_argument("AtomicMeasure: negative weight");
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.position < b.position; });
  atoms_.reserve(atoms.size());
  for (const Atom& a : atoms) {
    if (a.weight == 0.0) continue;
    if (!atoms_.empty() && a.position - atoms_.back().position <= kMergeGap) {
      atoms_.back().weight += a.weight;
    } else {
      atoms_.push_back(a);
    }
  }
  total_mass_ = 0.0;
  for (const Atom& a : atoms_) total_mass_ += a.weight;
  if (probability_ && std::abs(total_mass_ - 1.0) > kMassTol)
    throw std::invalid_argument("AtomicMeasure: weights must sum to 1 (got " +
                                fmt17(total_mass_) + ")");
}

AtomicMeasure AtomicMeasure::probability(std::vector<Atom> atoms) {
  return AtomicMeasure(std::move(atoms), true);
}

AtomicMeasure AtomicMeasure::scaled(std::vector<Atom> atoms) {
  return AtomicMeasure(std::move(atoms), false);
}

AtomicMeasure AtomicMeasure::point(double position) {
  return AtomicMeasure({{position, 1.0}}, true);
}

AtomicMeasure AtomicMeasure::from_particles(std::span<const double> positions,
                                            std::span<const double> weights) {
  if (positions.size() != weights.size())
    throw std::invalid_argument("from_particles: size mismatch");
  std::vector<Atom> atoms(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i)
    atoms[i] = {positions[i], weights[i]};
  return AtomicMeasure(std::move(atoms), true);
}

AtomicMeasure AtomicMeasure::empirical(std::span<const double> positions) {
  if (positions.empty()) throw std::invalid_argument("empirical: no positions");
  const double w = 1.0 / static_cast<double>(positions.size());
  std::vector<Atom> atoms(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) atoms[i] = {positions[i], w};
  return AtomicMeasure(std::move(atoms), true);
}

double AtomicMeasure::cdf(double x) const {
  double f = 0.0;
  for (const Atom& a : atoms_) {
    if (a.position > x) break;
    f += a.weight;
  }
  return f;
}

std::string AtomicMeasure::to_csv() const {
  std::string out = "position,weight\n";
  for (const Atom& a : atoms_)
    out += fmt17(a.position) + "," + fmt17(a.weight) + "\n";
  return out;
}

std::string AtomicMeasure::cdf_table_csv() const {
  std::string out = "x,F\n";
  double f = 0.0;
  for (const Atom& a : atoms_) {
    f += a.weight;
    out += fmt17(a.position) + "," + fmt17(f) + "\n";
  }
  return out;
}

std::complex<double> cauchy_transform(const AtomicMeasure& m, std::complex<double> z) {
  if (z.imag() <= 0.0)
    throw std::invalid_argument("cauchy_transform: z must lie in the upper half-plane");
  std::complex<double> sum = 0.0;
  for (const auto& a : m.atoms()) sum += 2.0 * a.weight / (z - a.position);
  return sum;
}

std::vector<double> stieltjes_invert(
    const std::function<std::complex<double>(std::complex<double>)>& transform,
    std::span<const double> grid, double eps) {
  if (eps <= 0.0) throw std::invalid_argument("stieltjes_invert: eps must be positive");
  std::vector<double> density(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const std::complex<double> m = transform({grid[i], eps});
    density[i] = -m.imag() / (2.0 * std::numbers::pi);
  }
  return density;
}

std::vector<double> stieltjes_invert(const AtomicMeasure& m,
                                     std::span<const double> grid, double eps) {
  return stieltjes_invert(
      [&m](std::complex<double> z) { return cauchy_transform(m, z); }, grid, eps);
}

double wasserstein1(const AtomicMeasure& a, const AtomicMeasure& b) {
  if (!a.is_probability() || !b.is_probability())
    throw std::invalid_argument("wasserstein1: both measures must be probabilities");
  // int |F_a - F_b| dx is piecewise constant between the merged breakpoints.
  std::vector<double> xs;
  xs.reserve(a.size() + b.size());
  for (const auto& at : a.atoms()) xs.push_back(at.position);
  for (const auto& at : b.atoms()) xs.push_back(at.position);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  double dist = 0.0;
  std::size_t ia = 0, ib = 0;
  double fa = 0.0, fb = 0.0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    while (ia < a.size() && a.atoms()[ia].position <= xs[i]) fa += a.atoms()[ia++].weight;
    while (ib < b.size() && b.atoms()[ib].position <= xs[i]) fb += b.atoms()[ib++].weight;
    dist += std::abs(fa - fb) * (xs[i + 1] - xs[i]);
  }
  return dist;
}

}  // namespace slitflow
