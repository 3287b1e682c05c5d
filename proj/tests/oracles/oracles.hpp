#pragma once
// Brute-force reference computations used only by the tests. Each one
// follows the textbook definition directly and shares no code path with
// the library routine it checks.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <vector>

#include "copulim/checkerboard.hpp"
#include "copulim/marginal.hpp"
#include "copulim/tensor_measure.hpp"

namespace oracle {

using copulim::Atom;
using copulim::ExtReal;

// F(x) by summing every atom at or below x.
inline double atomic_cdf(const std::vector<Atom>& atoms, ExtReal x) {
  double s = 0.0;
  for (const Atom& a : atoms)
    if (a.x <= x) s += a.w;
  return s;
}

// inf{x : F(x) >= u} by scanning candidate points in increasing order.
inline ExtReal atomic_quantile(const std::vector<Atom>& atoms, double u) {
  for (const Atom& a : atoms)
    if (atomic_cdf(atoms, a.x) >= u && (u > 0.0 || a.w > 0.0)) return a.x;
  return ExtReal::pos_inf();
}

// Marginalization by enumerating every node and keying the kept coordinates.
inline std::map<std::vector<std::size_t>, double> marginal_masses(const copulim::TensorMeasure& t,
                                                                  const std::vector<std::size_t>& keep_axes) {
  std::map<std::vector<std::size_t>, double> out;
  const std::size_t total = t.shape().size();
  for (std::size_t f = 0; f < total; ++f) {
    const auto idx = t.shape().unflatten(f);
    std::vector<std::size_t> key;
    for (std::size_t a : keep_axes) key.push_back(idx[a]);
    out[key] += t.mass()[static_cast<Eigen::Index>(f)];
  }
  return out;
}

// F_J(x) by testing coordinatewise domination of every node.
inline double tensor_cdf(const copulim::TensorMeasure& t, const std::vector<ExtReal>& x) {
  double s = 0.0;
  for (std::size_t f = 0; f < t.shape().size(); ++f) {
    const auto idx = t.shape().unflatten(f);
    bool below = true;
    for (std::size_t a = 0; a < idx.size(); ++a) below = below && t.axis(a)[idx[a]] <= x[a];
    if (below) s += t.mass()[static_cast<Eigen::Index>(f)];
  }
  return s;
}

// C(prod_j (lo_j, hi_j]) for a checkerboard copula: for every cell, the
// mass times the product of per-axis overlap fractions.
inline double copula_box_mass(const copulim::CheckerboardCopula& c, const std::vector<double>& lo,
                              const std::vector<double>& hi) {
  const int n = c.order();
  double s = 0.0;
  for (std::size_t f = 0; f < c.shape().size(); ++f) {
    const auto cell = c.shape().unflatten(f);
    double w = c.mass()[static_cast<Eigen::Index>(f)];
    for (std::size_t a = 0; a < cell.size(); ++a) {
      const double a0 = static_cast<double>(cell[a]) / n, a1 = static_cast<double>(cell[a] + 1) / n;
      const double overlap = std::max(0.0, std::min(a1, hi[a]) - std::max(a0, lo[a]));
      w *= overlap * n;
    }
    s += w;
  }
  return s;
}

// Joint mass of the quantile pushforward at each atom tuple: the copula
// measure of the box of CDF plateaus (F(x_{k-1}), F(x_k)].
inline std::vector<double> pushforward_masses(const copulim::CheckerboardCopula& c,
                                              const std::vector<std::vector<Atom>>& marginals) {
  std::vector<std::size_t> ext;
  for (const auto& m : marginals) ext.push_back(m.size());
  copulim::TensorShape shape(ext);
  std::vector<double> out(shape.size());
  for (std::size_t f = 0; f < shape.size(); ++f) {
    const auto idx = shape.unflatten(f);
    std::vector<double> lo(idx.size()), hi(idx.size());
    for (std::size_t a = 0; a < idx.size(); ++a) {
      double below = 0.0;
      for (std::size_t k = 0; k < idx[a]; ++k) below += marginals[a][k].w;
      lo[a] = below;
      hi[a] = below + marginals[a][idx[a]].w;
    }
    out[f] = copula_box_mass(c, lo, hi);
  }
  return out;
}

inline double phi(ExtReal x) {
  if (x.is_neg_inf()) return 0.0;
  if (x.is_pos_inf()) return 1.0;
  return 0.5 + std::atan(x.value()) / std::numbers::pi;
}

// The same integral for two atomic laws: both CDFs are constant between
// consecutive support points, so it is a finite sum over the merged nodes.
inline double cdf_area_atomic(const std::vector<Atom>& a, const std::vector<Atom>& b) {
  std::vector<ExtReal> nodes;
  for (const Atom& x : a) nodes.push_back(x.x);
  for (const Atom& x : b) nodes.push_back(x.x);
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < nodes.size(); ++k)
    s += std::abs(atomic_cdf(a, nodes[k]) - atomic_cdf(b, nodes[k])) * (phi(nodes[k + 1]) - phi(nodes[k]));
  return s;
}

// integral_0^1 |F_a(phi^{-1}(t)) - F_b(phi^{-1}(t))| dt by the midpoint rule.
template <typename CdfA, typename CdfB>
double cdf_area(CdfA Fa, CdfB Fb, int panels = 2000000) {
  double s = 0.0;
  const double h = 1.0 / panels;
  for (int k = 0; k < panels; ++k) {
    const double t = (k + 0.5) * h;
    const double x = std::tan(std::numbers::pi * (t - 0.5));
    s += std::abs(Fa(x) - Fb(x));
  }
  return s * h;
}

// Maximum-weight perfect assignment (Hungarian method with potentials,
// O(n^3)); returns row -> column.
inline std::vector<int> hungarian_max(const std::vector<std::vector<double>>& weight) {
  const int n = static_cast<int>(weight.size());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  auto cost = [&](int i, int j) { return -weight[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)]; };
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0, j) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> assignment(static_cast<std::size_t>(n));
  for (int j = 1; j <= n; ++j) assignment[static_cast<std::size_t>(p[j] - 1)] = j - 1;
  return assignment;
}

}  // namespace oracle
