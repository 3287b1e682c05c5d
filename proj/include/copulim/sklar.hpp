#pragma once

#include <map>
#include <vector>

#include "copulim/marginal.hpp"
#include "copulim/projective.hpp"
#include "copulim/tensor_measure.hpp"

namespace copulim {

/// Per-label discretization grids for continuous marginals.
using GridMap = std::map<Label, Axis>;

/// The joint law obtained by pushing a copula family forward through the
/// quantile functions of the marginals. Evaluated lazily: finite-dimensional
/// CDFs come from F_J(x) = C_J(F_j(x_j))_j.
struct JointMeasure {
  ProjectiveFamily copula;
  std::map<Label, Marginal> marginals;

  const Marginal& marginal(Label l) const;
};

/// ConfigurationError if the family is not a copula family, or if a finite
/// universe has a label without marginal.
JointMeasure compose(ProjectiveFamily copula, std::map<Label, Marginal> marginals);

double joint_cdf(const JointMeasure& jm, const IndexSubset& J, const std::vector<ExtReal>& x);

/// Eager pushforward of C_J through the quantile maps. Each axis of (0,1]
/// is cut at the cell boundaries k/n and at the marginal's CDF levels, so
/// every piece of a cell maps to a single atom. Continuous marginals are
/// first atomized on grids[label] (ConfigurationError if absent).
TensorMeasure discretize_joint(const JointMeasure& jm, const IndexSubset& J, const GridMap& grids = {});

/// The atomic marginal discretize_joint uses for one label.
Marginal discretized_marginal(const JointMeasure& jm, Label l, const GridMap& grids = {});

/// The general family J -> discretize_joint(jm, J, grids).
ProjectiveFamily joint_family(const JointMeasure& jm, GridMap grids = {});

struct SklarReport {
  double max_deviation = 0.0;
  std::size_t probes = 0;
  std::vector<ExtReal> worst_probe;
};

/// Compares joint_cdf with the CDF of discretize_joint at every probe.
SklarReport verify_sklar(const JointMeasure& jm, const IndexSubset& J, const std::vector<std::vector<ExtReal>>& probes,
                         const GridMap& grids = {});
/// Probes every node of the discretized support.
SklarReport verify_sklar(const JointMeasure& jm, const IndexSubset& J, const GridMap& grids = {});

inline constexpr double kMarginalConsistencyTolerance = 1e-9;

/// Orders n in [1, max_order] whose cell boundaries k/n all appear among
/// the CDF images of the grid points of every axis.
std::vector<int> compatible_orders(const TensorMeasure& t, const std::vector<Marginal>& marginals, int max_order = 64);

/// Recovers the order-n checkerboard copula of a discretized joint whose
/// axes carry the given continuous marginals. UnsupportedError for atomic
/// marginals, ConsistencyError if the marginals do not match t, and
/// ConfigurationError if n is not a compatible order.
CheckerboardCopula decompose(const TensorMeasure& t, const std::vector<Marginal>& marginals, int n);

}  // namespace copulim
