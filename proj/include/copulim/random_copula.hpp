#pragma once

#include <random>

#include "copulim/checkerboard.hpp"

namespace copulim {

using Rng = std::mt19937_64;

/// Rescales a positive tensor so every axis margin equals 1/n, alternating
/// over axes (iterative proportional fitting). Stops once the largest margin
/// deviation falls below `tol`; throws ValidationError on nonpositive input
/// and InternalError if `max_sweeps` is exhausted.
CheckerboardCopula fit_uniform_margins(const IndexSubset& J, int n, Eigen::VectorXd positive_mass,
                                       double tol = 1e-14, int max_sweeps = 100000);

/// A generic interior copula: uniform(0.05, 1) entries scaled to uniform
/// margins.
CheckerboardCopula random_copula(const IndexSubset& J, int n, Rng& rng);

/// Uniformly random permutation of {0..n-1}.
std::vector<int> random_permutation(int n, Rng& rng);

}  // namespace copulim
