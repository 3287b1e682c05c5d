#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "copulim/checkerboard.hpp"

namespace copulim {

using Permutation = std::vector<int>;  // perm[row] = column

struct BirkhoffTerm {
  double weight = 0.0;
  Permutation permutation;
};

/// Writes a 2-d checkerboard copula as a convex combination of permutation
/// copulas. Each step finds a perfect matching inside the support of the
/// remaining doubly stochastic matrix n*C (Kuhn's augmenting paths, lowest
/// index first) and peels off its smallest entry. DimensionError unless
/// |J| = 2; ValidationError if n*C is not doubly stochastic within 1e-10.
std::vector<BirkhoffTerm> birkhoff_decompose(const CheckerboardCopula& c);

/// sum_k weight_k * P_k / n as a copula over J.
CheckerboardCopula birkhoff_recompose(const IndexSubset& J, int n, const std::vector<BirkhoffTerm>& terms);

/// A functional on 2-d order-n checkerboard copulas. Convexity is declared
/// by the caller and only spot-checked.
struct ConvexFunctional {
  enum class Declared { Linear, Convex };
  std::string name;
  Declared declared = Declared::Convex;
  std::function<double(const CheckerboardCopula&)> evaluate;
};

ConvexFunctional linear_functional(const RowMajorMatrix& weights, std::string name = "linear");
ConvexFunctional max_cell_functional();
ConvexFunctional constant_functional(double value);

struct ExtremalConfig {
  std::size_t samples = 1000;         // random interior copulas
  std::size_t midpoint_checks = 100;  // random pairs for the convexity spot-check
  std::uint64_t seed = 0;
};

struct ExtremalResult {
  double extremal_best = 0.0;
  Permutation best_permutation;
  double interior_best = 0.0;
  std::size_t permutations_evaluated = 0;
  std::size_t interior_evaluated = 0;
  std::size_t convexity_violations = 0;
};

/// Exhaustive maximum of g over all n! permutation copulas (lexicographically
/// first maximizer) together with the best value over random interior
/// copulas. ConfigurationError for n outside [1, 8]; EvaluationError if g
/// returns a non-finite value.
ExtremalResult maximize_convex(const ConvexFunctional& g, int n, const ExtremalConfig& cfg = {});

}  // namespace copulim
