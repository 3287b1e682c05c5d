#pragma once

#include <span>
#include <vector>

#include "copulim/ext_real.hpp"

namespace copulim {

inline constexpr double kMassTolerance = 1e-12;

struct Atom {
  ExtReal x;
  double w = 0.0;
  friend bool operator==(const Atom&, const Atom&) = default;
};

struct Knot {
  double x = 0.0;
  double F = 0.0;
  friend bool operator==(const Knot&, const Knot&) = default;
};

/// One-dimensional probability law on the extended real line.
///
/// Either a finite list of atoms (possibly at -inf or +inf) or a
/// strictly increasing, piecewise-linear CDF through a list of knots.
/// Immutable once built; the factories validate every invariant.
class Marginal {
 public:
  enum class Kind { Atomic, Continuous };

  static Marginal atomic(std::vector<Atom> atoms);
  static Marginal continuous(std::vector<Knot> knots);
  static Marginal dirac(ExtReal x) { return atomic({{x, 1.0}}); }
  /// Uniform law on [lo, hi] as a two-knot continuous marginal.
  static Marginal uniform(double lo = 0.0, double hi = 1.0) { return continuous({{lo, 0.0}, {hi, 1.0}}); }

  Kind kind() const { return kind_; }
  bool is_atomic() const { return kind_ == Kind::Atomic; }
  std::span<const Atom> atoms() const { return atoms_; }
  std::span<const Knot> knots() const { return knots_; }

  /// Cumulative mass through atom k, clamped so that the last entry is
  /// exactly 1. Empty for continuous marginals.
  std::span<const double> cumulative() const { return cumulative_; }

  friend bool operator==(const Marginal& a, const Marginal& b) {
    return a.kind_ == b.kind_ && a.atoms_ == b.atoms_ && a.knots_ == b.knots_;
  }

 private:
  Marginal() = default;
  Kind kind_ = Kind::Atomic;
  std::vector<Atom> atoms_;
  std::vector<Knot> knots_;
  std::vector<double> cumulative_;
};

/// F(x) = m((-inf, x]).
double cdf_eval(const Marginal& m, ExtReal x);

/// Generalized inverse inf{x : F(x) >= u}. At u = 0 returns the smallest
/// support point (first positive atom, or first knot). Throws DomainError
/// for u outside [0, 1].
ExtReal quantile(const Marginal& m, double u);

/// Index of the atom returned by quantile(m, u) for an atomic marginal.
std::size_t quantile_index(const Marginal& m, double u);

/// Smallest and largest points carrying mass.
ExtReal support_min(const Marginal& m);
ExtReal support_max(const Marginal& m);

/// Discretizes a marginal onto a grid: the mass of (g[k-1], g[k]] goes to
/// g[k]. If F(grid.back()) < 1 the upper end of the support is appended.
/// Atomic marginals must have every positive atom on the grid.
Marginal atomize(const Marginal& m, std::span<const ExtReal> grid);

}  // namespace copulim
