#include "copulim/tensor_measure.hpp"

#include <algorithm>
#include <cmath>

#include "copulim/errors.hpp"

namespace copulim {

namespace {

std::vector<std::size_t> extents_of(const Grid& grid) {
  std::vector<std::size_t> e;
  e.reserve(grid.size());
  for (const Axis& ax : grid) e.push_back(ax.size());
  return e;
}

}  // namespace

TensorMeasure::TensorMeasure(IndexSubset J, Grid grid, Eigen::VectorXd mass)
    : J_(std::move(J)), grid_(std::move(grid)), mass_(std::move(mass)) {
  if (J_.empty()) throw IndexError("tensor measure over an empty index subset");
  if (grid_.size() != J_.size()) throw IndexError("tensor measure: one grid axis per label required");
  for (const Axis& ax : grid_) {
    if (ax.empty()) throw ValidationError("tensor measure: grid axis without points");
    for (std::size_t k = 1; k < ax.size(); ++k)
      if (!(ax[k - 1] < ax[k])) throw ValidationError("tensor measure: grid axis not strictly increasing");
  }
  shape_ = TensorShape(extents_of(grid_));
  if (static_cast<std::size_t>(mass_.size()) != shape_.size())
    throw IndexError("tensor measure: mass tensor does not match grid shape");
  double total = 0.0;
  for (Eigen::Index k = 0; k < mass_.size(); ++k) {
    if (!(mass_[k] >= 0.0) || !std::isfinite(mass_[k])) throw ValidationError("tensor measure: negative or non-finite mass");
    total += mass_[k];
  }
  if (std::abs(total - 1.0) > kMassTolerance)
    throw ValidationError("tensor measure: total mass " + std::to_string(total) + " differs from 1");
}

TensorMeasure TensorMeasure::from_marginal(Label label, const Marginal& m) {
  return product({{label, m}});
}

TensorMeasure TensorMeasure::product(const std::vector<std::pair<Label, Marginal>>& marginals) {
  std::vector<std::pair<Label, Marginal>> sorted = marginals;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Label> labels;
  Grid grid;
  std::vector<std::vector<double>> weights;
  for (const auto& [label, m] : sorted) {
    if (!m.is_atomic()) throw ConfigurationError("product: marginals must be atomic");
    labels.push_back(label);
    Axis ax;
    std::vector<double> w;
    for (const Atom& a : m.atoms()) {
      ax.push_back(a.x);
      w.push_back(a.w);
    }
    grid.push_back(std::move(ax));
    weights.push_back(std::move(w));
  }
  TensorShape shape(extents_of(grid));
  Eigen::VectorXd mass(static_cast<Eigen::Index>(shape.size()));
  for_each_index(shape.extents(), [&](const std::vector<std::size_t>& idx) {
    double p = 1.0;
    for (std::size_t a = 0; a < idx.size(); ++a) p *= weights[a][idx[a]];
    mass[static_cast<Eigen::Index>(shape.flat(idx))] = p;
  });
  return TensorMeasure(IndexSubset(std::move(labels)), std::move(grid), std::move(mass));
}

Marginal TensorMeasure::axis_marginal(std::size_t axis) const {
  const TensorMeasure m = marginalize_tensor(*this, IndexSubset{J_[axis]});
  std::vector<Atom> atoms;
  for (std::size_t k = 0; k < m.grid_[0].size(); ++k) atoms.push_back({m.grid_[0][k], m.mass_[static_cast<Eigen::Index>(k)]});
  return Marginal::atomic(std::move(atoms));
}

TensorMeasure marginalize_tensor(const TensorMeasure& t, const IndexSubset& J1) {
  if (J1.empty()) throw IndexError("marginalize: target subset is empty");
  if (!J1.is_subset_of(t.index_subset()))
    throw IndexError("marginalize: " + to_string(J1) + " is not a subset of " + to_string(t.index_subset()));
  if (J1 == t.index_subset()) return t;

  std::vector<std::size_t> keep;
  Grid grid;
  for (Label l : J1) {
    const std::size_t a = *t.index_subset().position(l);
    keep.push_back(a);
    grid.push_back(t.axis(a));
  }
  TensorShape out_shape(extents_of(grid));
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(out_shape.size()));
  const TensorShape& in_shape = t.shape();
  for_each_index(in_shape.extents(), [&](const std::vector<std::size_t>& idx) {
    std::size_t f = 0;
    for (std::size_t k = 0; k < keep.size(); ++k) f += idx[keep[k]] * out_shape.stride(k);
    out[static_cast<Eigen::Index>(f)] += t.mass()[static_cast<Eigen::Index>(in_shape.flat(idx))];
  });
  return TensorMeasure(J1, std::move(grid), std::move(out));
}

TensorMeasure pushforward_tensor(const TensorMeasure& t, const std::vector<Axis>& maps) {
  if (maps.size() != t.rank()) throw DomainError("pushforward: one map per axis required");
  Grid grid;
  std::vector<std::vector<std::size_t>> target(t.rank());
  for (std::size_t a = 0; a < t.rank(); ++a) {
    const Axis& map = maps[a];
    if (map.size() != t.axis(a).size())
      throw DomainError("pushforward: map on axis " + std::to_string(a) + " does not cover every grid point");
    for (std::size_t k = 1; k < map.size(); ++k)
      if (map[k] < map[k - 1]) throw DomainError("pushforward: map on axis " + std::to_string(a) + " is not nondecreasing");
    Axis image = map;
    image.erase(std::unique(image.begin(), image.end()), image.end());
    for (ExtReal v : map)
      target[a].push_back(static_cast<std::size_t>(std::lower_bound(image.begin(), image.end(), v) - image.begin()));
    grid.push_back(std::move(image));
  }
  TensorShape out_shape(extents_of(grid));
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(out_shape.size()));
  const TensorShape& in_shape = t.shape();
  for_each_index(in_shape.extents(), [&](const std::vector<std::size_t>& idx) {
    std::size_t f = 0;
    for (std::size_t a = 0; a < idx.size(); ++a) f += target[a][idx[a]] * out_shape.stride(a);
    out[static_cast<Eigen::Index>(f)] += t.mass()[static_cast<Eigen::Index>(in_shape.flat(idx))];
  });
  return TensorMeasure(t.index_subset(), std::move(grid), std::move(out));
}

double cdf_eval_tensor(const TensorMeasure& t, const std::vector<ExtReal>& x) {
  if (x.size() != t.rank()) throw IndexError("cdf_eval_tensor: point has the wrong dimension");
  std::vector<std::size_t> bound(t.rank());
  for (std::size_t a = 0; a < t.rank(); ++a) {
    const Axis& ax = t.axis(a);
    bound[a] = static_cast<std::size_t>(std::upper_bound(ax.begin(), ax.end(), x[a]) - ax.begin());
  }
  double total = 0.0;
  for_each_index(bound, [&](const std::vector<std::size_t>& idx) { total += t.at(idx); });
  return total;
}

double max_mass_difference(const TensorMeasure& a, const TensorMeasure& b) {
  if (a.index_subset() != b.index_subset() || a.grid() != b.grid())
    throw IndexError("max_mass_difference: measures live on different grids");
  return (a.mass() - b.mass()).cwiseAbs().maxCoeff();
}

double cdf_sup_distance(const TensorMeasure& a, const TensorMeasure& b) {
  if (a.index_subset() != b.index_subset()) throw IndexError("cdf_sup_distance: index subsets differ");
  std::vector<Axis> axes(a.rank());
  std::vector<std::size_t> bound(a.rank());
  for (std::size_t k = 0; k < a.rank(); ++k) {
    std::set_union(a.axis(k).begin(), a.axis(k).end(), b.axis(k).begin(), b.axis(k).end(),
                   std::back_inserter(axes[k]));
    bound[k] = axes[k].size();
  }
  double worst = 0.0;
  std::vector<ExtReal> x(a.rank());
  for_each_index(bound, [&](const std::vector<std::size_t>& idx) {
    for (std::size_t k = 0; k < idx.size(); ++k) x[k] = axes[k][idx[k]];
    worst = std::max(worst, std::abs(cdf_eval_tensor(a, x) - cdf_eval_tensor(b, x)));
  });
  return worst;
}

}  // namespace copulim
