#include "copulim/marginal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "copulim/errors.hpp"

namespace copulim {

Marginal Marginal::atomic(std::vector<Atom> atoms) {
  if (atoms.empty()) throw ValidationError("atomic marginal needs at least one atom");
  double total = 0.0;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    if (!(atoms[k].w >= 0.0) || !std::isfinite(atoms[k].w))
      throw ValidationError("atomic marginal: negative or non-finite weight at atom " + std::to_string(k));
    if (k > 0 && !(atoms[k - 1].x < atoms[k].x))
      throw ValidationError("atomic marginal: atom positions must be strictly increasing");
    total += atoms[k].w;
  }
  if (std::abs(total - 1.0) > kMassTolerance)
    throw ValidationError("atomic marginal: weights sum to " + std::to_string(total) + ", not 1");

  Marginal m;
  m.kind_ = Kind::Atomic;
  m.cumulative_.resize(atoms.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    acc += atoms[k].w;
    m.cumulative_[k] = std::min(acc, 1.0);
  }
  m.cumulative_.back() = 1.0;
  m.atoms_ = std::move(atoms);
  return m;
}

Marginal Marginal::continuous(std::vector<Knot> knots) {
  if (knots.size() < 2) throw ValidationError("continuous marginal needs at least two knots");
  for (std::size_t k = 0; k < knots.size(); ++k) {
    if (!std::isfinite(knots[k].x)) throw ValidationError("continuous marginal: knots must be finite");
    if (k > 0 && !(knots[k - 1].x < knots[k].x))
      throw ValidationError("continuous marginal: knot positions must be strictly increasing");
    if (k > 0 && !(knots[k - 1].F < knots[k].F))
      throw ValidationError("continuous marginal: CDF values must be strictly increasing");
  }
  if (knots.front().F != 0.0 || knots.back().F != 1.0)
    throw ValidationError("continuous marginal: CDF must run from 0 at the first knot to 1 at the last");
  Marginal m;
  m.kind_ = Kind::Continuous;
  m.knots_ = std::move(knots);
  return m;
}

double cdf_eval(const Marginal& m, ExtReal x) {
  if (m.is_atomic()) {
    auto atoms = m.atoms();
    // Last atom with position <= x.
    auto it = std::upper_bound(atoms.begin(), atoms.end(), x,
                               [](ExtReal v, const Atom& a) { return v < a.x; });
    if (it == atoms.begin()) return 0.0;
    return m.cumulative()[static_cast<std::size_t>(it - atoms.begin()) - 1];
  }
  auto knots = m.knots();
  const double v = x.value();
  if (v <= knots.front().x) return 0.0;
  if (v >= knots.back().x) return 1.0;
  auto it = std::upper_bound(knots.begin(), knots.end(), v,
                             [](double val, const Knot& k) { return val < k.x; });
  const Knot& hi = *it;
  const Knot& lo = *(it - 1);
  if (v == lo.x) return lo.F;
  const double t = (v - lo.x) / (hi.x - lo.x);
  return lo.F + t * (hi.F - lo.F);
}

std::size_t quantile_index(const Marginal& m, double u) {
  if (!m.is_atomic()) throw DomainError("quantile_index: marginal is not atomic");
  if (!(u >= 0.0 && u <= 1.0)) throw DomainError("quantile: u must lie in [0, 1]");
  auto atoms = m.atoms();
  if (u == 0.0) {
    for (std::size_t k = 0; k < atoms.size(); ++k)
      if (atoms[k].w > 0.0) return k;
  }
  auto cum = m.cumulative();
  auto it = std::lower_bound(cum.begin(), cum.end(), u);
  return static_cast<std::size_t>(it - cum.begin());
}

ExtReal quantile(const Marginal& m, double u) {
  if (!(u >= 0.0 && u <= 1.0)) throw DomainError("quantile: u must lie in [0, 1]");
  if (m.is_atomic()) return m.atoms()[quantile_index(m, u)].x;
  auto knots = m.knots();
  if (u == 0.0) return knots.front().x;
  auto it = std::lower_bound(knots.begin(), knots.end(), u,
                             [](const Knot& k, double val) { return k.F < val; });
  if (it->F == u) return it->x;
  const Knot& hi = *it;
  const Knot& lo = *(it - 1);
  const double t = (u - lo.F) / (hi.F - lo.F);
  return lo.x + t * (hi.x - lo.x);
}

ExtReal support_min(const Marginal& m) {
  if (!m.is_atomic()) return m.knots().front().x;
  for (const Atom& a : m.atoms())
    if (a.w > 0.0) return a.x;
  return m.atoms().front().x;
}

ExtReal support_max(const Marginal& m) {
  if (!m.is_atomic()) return m.knots().back().x;
  auto atoms = m.atoms();
  for (auto it = atoms.rbegin(); it != atoms.rend(); ++it)
    if (it->w > 0.0) return it->x;
  return atoms.back().x;
}

Marginal atomize(const Marginal& m, std::span<const ExtReal> grid) {
  if (grid.empty()) throw ConfigurationError("atomize: empty grid");
  std::vector<ExtReal> points(grid.begin(), grid.end());
  for (std::size_t k = 1; k < points.size(); ++k)
    if (!(points[k - 1] < points[k])) throw ConfigurationError("atomize: grid must be strictly increasing");
  if (cdf_eval(m, points.back()) < 1.0) points.push_back(support_max(m));

  if (m.is_atomic()) {
    for (const Atom& a : m.atoms())
      if (a.w > 0.0 && !std::binary_search(points.begin(), points.end(), a.x))
        throw ConfigurationError("atomize: atom at " + to_string(a.x) + " is not a grid point");
  }

  std::vector<Atom> atoms;
  atoms.reserve(points.size());
  double prev = 0.0;
  double total = 0.0;
  for (ExtReal p : points) {
    const double F = cdf_eval(m, p);
    const double w = std::max(F - prev, 0.0);
    atoms.push_back({p, w});
    total += w;
    prev = std::max(prev, F);
  }
  // Cumulative differences telescope to 1 up to rounding; fold the residue
  // into the heaviest atom so the result validates at kMassTolerance.
  auto heaviest = std::max_element(atoms.begin(), atoms.end(),
                                   [](const Atom& a, const Atom& b) { return a.w < b.w; });
  heaviest->w += 1.0 - total;
  return Marginal::atomic(std::move(atoms));
}

}  // namespace copulim
