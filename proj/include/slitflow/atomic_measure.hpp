#pragma once

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace slitflow {

/// Weighted point masses on the real line. Positions are kept strictly
/// increasing (atoms closer than 1e-14 are merged) and weights are
/// nonnegative. A measure is a probability measure unless it was built
/// through `scaled`, in which case the total mass is whatever the atoms sum to.
class AtomicMeasure {
 public:
  struct Atom {
    double position;
    double weight;
  };

  static AtomicMeasure probability(std::vector<Atom> atoms);
  static AtomicMeasure scaled(std::vector<Atom> atoms);
  static AtomicMeasure point(double position);
  static AtomicMeasure from_particles(std::span<const double> positions,
                                      std::span<const double> weights);
  /// Equal weights 1/N on the given positions.
  static AtomicMeasure empirical(std::span<const double> positions);

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  double total_mass() const { return total_mass_; }
  bool is_probability() const { return probability_; }

  /// F(x) = mass of (-inf, x]; right-continuous step function.
  double cdf(double x) const;

  /// "position,weight" rows, ascending, 17 significant digits.
  std::string to_csv() const;
  /// "x,F(x)" rows at the atom positions.
  std::string cdf_table_csv() const;

 private:
  AtomicMeasure(std::vector<Atom> atoms, bool probability);

  std::vector<Atom> atoms_;
  double total_mass_ = 0.0;
  bool probability_ = true;
};

/// M(z) = sum_k 2 w_k / (z - x_k), defined for Im z > 0 (throws otherwise).
/// Twice the classical Cauchy transform; Im M < 0 on the upper half-plane.
std::complex<double> cauchy_transform(const AtomicMeasure& m, std::complex<double> z);

/// A measure bundled with its transform evaluator.
struct CauchyTransform {
  AtomicMeasure source;
  std::complex<double> operator()(std::complex<double> z) const {
    return cauchy_transform(source, z);
  }
};

/// Density samples rho(x) ~ -Im M(x + i eps) / (2 pi). The caller owns the
/// eps -> 0 extrapolation; nothing is hidden here.
std::vector<double> stieltjes_invert(
    const std::function<std::complex<double>(std::complex<double>)>& transform,
    std::span<const double> grid, double eps);
std::vector<double> stieltjes_invert(const AtomicMeasure& m,
                                     std::span<const double> grid, double eps);

/// Exact L1 distance between the two cumulative distributions, computed over
/// the merged atom breakpoints. Both arguments must be probability measures.
double wasserstein1(const AtomicMeasure& a, const AtomicMeasure& b);

}  // namespace slitflow
