#pragma once

#include <Eigen/Core>
#include <utility>
#include <vector>

#include "copulim/ext_real.hpp"
#include "copulim/index_subset.hpp"
#include "copulim/marginal.hpp"
#include "copulim/tensor_shape.hpp"

namespace copulim {

using Axis = std::vector<ExtReal>;
using Grid = std::vector<Axis>;

/// Discrete probability measure on the product grid of its index subset.
/// Node (k_1, ..., k_d) sits at (grid[0][k_1], ..., grid[d-1][k_d]) and
/// carries mass(flat(k)).
class TensorMeasure {
 public:
  /// Validates grid shape, nonnegativity and total mass.
  TensorMeasure(IndexSubset J, Grid grid, Eigen::VectorXd mass);

  /// The 1-d measure of an atomic marginal placed on axis `label`.
  static TensorMeasure from_marginal(Label label, const Marginal& m);
  /// Independent product of atomic marginals.
  static TensorMeasure product(const std::vector<std::pair<Label, Marginal>>& marginals);

  const IndexSubset& index_subset() const { return J_; }
  const Grid& grid() const { return grid_; }
  const Axis& axis(std::size_t a) const { return grid_[a]; }
  const Eigen::VectorXd& mass() const { return mass_; }
  const TensorShape& shape() const { return shape_; }
  std::size_t rank() const { return J_.size(); }

  double at(const std::vector<std::size_t>& idx) const { return mass_[static_cast<Eigen::Index>(shape_.flat(idx))]; }

  /// Atomic marginal along one axis (zero-mass grid points are kept).
  Marginal axis_marginal(std::size_t axis) const;

  friend bool operator==(const TensorMeasure& a, const TensorMeasure& b) {
    return a.J_ == b.J_ && a.grid_ == b.grid_ && a.mass_ == b.mass_;
  }

 private:
  IndexSubset J_;
  Grid grid_;
  Eigen::VectorXd mass_;
  TensorShape shape_;
};

/// Sums mass over the axes not in J1. Throws IndexError unless J1 is a
/// nonempty subset of t's index subset.
TensorMeasure marginalize_tensor(const TensorMeasure& t, const IndexSubset& J1);

/// Image measure under a coordinatewise nondecreasing map given as a value
/// table per axis (maps[a][k] is the image of grid point k on axis a).
TensorMeasure pushforward_tensor(const TensorMeasure& t, const std::vector<Axis>& maps);

/// t(prod_j (-inf, x_j]).
double cdf_eval_tensor(const TensorMeasure& t, const std::vector<ExtReal>& x);

/// Largest entrywise mass difference; requires identical index subsets and
/// grids.
double max_mass_difference(const TensorMeasure& a, const TensorMeasure& b);

/// sup_x |F_a(x) - F_b(x)|, evaluated on the product of the per-axis union
/// of both grids (where the supremum of two step CDFs is attained).
double cdf_sup_distance(const TensorMeasure& a, const TensorMeasure& b);

}  // namespace copulim
