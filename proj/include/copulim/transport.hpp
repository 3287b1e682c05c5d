#pragma once

#include <Eigen/Core>

#include "copulim/checkerboard.hpp"

namespace copulim {

/// Optimal solution of a balanced transportation problem together with
/// the dual potentials that certify it.
struct TransportPlan {
  double cost = 0.0;
  RowMajorMatrix flow;        // m x n
  Eigen::VectorXd row_potential;
  Eigen::VectorXd col_potential;
  long pivots = 0;
};

/// Minimizes sum c_ij x_ij subject to x >= 0, row sums = supply, column
/// sums = demand. Transportation simplex: northwest-corner start, most
/// negative reduced cost enters (lowest index on ties), switching to
/// Bland's rule after a long run of degenerate pivots. Supplies and demands
/// must be nonnegative with equal totals (within 1e-9).
TransportPlan solve_transport(const Eigen::Ref<const Eigen::VectorXd>& supply,
                              const Eigen::Ref<const Eigen::VectorXd>& demand,
                              const Eigen::Ref<const RowMajorMatrix>& cost);

struct TransportCertificate {
  double max_feasibility_error = 0.0;  // row/column balance and negativity
  double max_slackness_error = 0.0;    // |c - u - v| on cells carrying flow
  double max_dual_violation = 0.0;     // max(0, u + v - c)
  bool feasible = false;
  bool optimal = false;
  bool ok() const { return feasible && optimal; }
};

TransportCertificate certify_transport(const TransportPlan& plan, const Eigen::Ref<const Eigen::VectorXd>& supply,
                                       const Eigen::Ref<const Eigen::VectorXd>& demand,
                                       const Eigen::Ref<const RowMajorMatrix>& cost, double feasibility_tol = 1e-10,
                                       double slackness_tol = 1e-8);

}  // namespace copulim
