#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "copulim/errors.hpp"
#include "copulim/extremal.hpp"
#include "copulim/random_copula.hpp"
#include "generators.hpp"
#include "oracles/oracles.hpp"

using namespace copulim;

namespace {

RowMajorMatrix random_weights(Rng& rng, int n) {
  RowMajorMatrix w(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) w(i, j) = gen::uniform(rng, -1.0, 1.0);
  return w;
}

}  // namespace

TEST(BirkhoffDecompose, Examples) {
  const auto como = birkhoff_decompose(make_comonotone({0, 1}, 5));
  ASSERT_EQ(como.size(), 1u);
  EXPECT_NEAR(como[0].weight, 1.0, 1e-15);
  EXPECT_EQ(como[0].permutation, (Permutation{0, 1, 2, 3, 4}));

  const auto indep = birkhoff_decompose(make_independence({0, 1}, 2));
  ASSERT_EQ(indep.size(), 2u);
  EXPECT_NEAR(indep[0].weight, 0.5, 1e-15);
  EXPECT_NEAR(indep[1].weight, 0.5, 1e-15);
  EXPECT_NE(indep[0].permutation, indep[1].permutation);
  for (const auto& t : indep) EXPECT_TRUE(t.permutation == (Permutation{0, 1}) || t.permutation == (Permutation{1, 0}));

  EXPECT_THROW(birkhoff_decompose(make_independence({0, 1, 2}, 2)), DimensionError);
  Eigen::VectorXd bad(4);
  bad << 0.5, 0.0, 0.5, 0.0;
  EXPECT_THROW(birkhoff_decompose(CheckerboardCopula({0, 1}, 2, bad)), ValidationError);
}

TEST(BirkhoffDecompose, ReconstructsRandomCopulas) {
  Rng rng(167);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = gen::integer(rng, 1, 8);
    const auto c = random_copula({0, 1}, n, rng);
    const auto terms = birkhoff_decompose(c);
    EXPECT_LE(terms.size(), static_cast<std::size_t>(n * n - 2 * n + 2));
    double total = 0.0;
    for (const auto& t : terms) {
      EXPECT_GT(t.weight, 0.0);
      total += t.weight;
      Permutation sorted = t.permutation;
      std::sort(sorted.begin(), sorted.end());
      Permutation id(static_cast<std::size_t>(n));
      std::iota(id.begin(), id.end(), 0);
      EXPECT_EQ(sorted, id);
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_LE(max_abs_difference(birkhoff_recompose({0, 1}, n, terms), c), 1e-9);
  }
}

TEST(PermutationCopulas, AreValidAndExtremal) {
  for (int n = 1; n <= 4; ++n) {
    Permutation p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    std::vector<CheckerboardCopula> all;
    do all.push_back(make_permutation({0, 1}, p));
    while (std::next_permutation(p.begin(), p.end()));
    for (const auto& c : all) EXPECT_TRUE(validate_copula(c).ok);
    // <P, Q> < <P, P> for every other permutation Q separates P from the
    // convex hull of the others.
    for (std::size_t i = 0; i < all.size(); ++i) {
      const double self = all[i].mass().dot(all[i].mass());
      for (std::size_t j = 0; j < all.size(); ++j)
        if (j != i) EXPECT_LT(all[i].mass().dot(all[j].mass()), self);
    }
  }
}

TEST(MaximizeConvex, LinearFunctionalMatchesTheAssignmentOptimum) {
  Rng rng(173);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = gen::integer(rng, 1, 6);
    const RowMajorMatrix w = random_weights(rng, n);
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) rows[static_cast<std::size_t>(i)].assign(w.row(i).begin(), w.row(i).end());
    const auto assignment = oracle::hungarian_max(rows);
    const auto g = linear_functional(w);
    const auto res = maximize_convex(g, n, {500, 50, static_cast<std::uint64_t>(trial)});
    EXPECT_EQ(res.best_permutation, assignment);
    EXPECT_EQ(res.extremal_best, g.evaluate(make_permutation({0, 1}, assignment)));
    EXPECT_LE(res.interior_best, res.extremal_best + 1e-9);
    EXPECT_EQ(res.convexity_violations, 0u);
    EXPECT_EQ(res.permutations_evaluated, static_cast<std::size_t>(std::tgamma(n + 1) + 0.5));
  }
}

TEST(MaximizeConvex, MaxCellAndConstantFunctionals) {
  for (int n = 1; n <= 6; ++n) {
    const auto res = maximize_convex(max_cell_functional(), n, {200, 20, 1});
    EXPECT_DOUBLE_EQ(res.extremal_best, 1.0 / n);
    Permutation id(static_cast<std::size_t>(n));
    std::iota(id.begin(), id.end(), 0);
    EXPECT_EQ(res.best_permutation, id);
    EXPECT_LE(res.interior_best, res.extremal_best + 1e-9);
  }
  const auto c = maximize_convex(constant_functional(2.5), 4, {100, 10, 2});
  EXPECT_EQ(c.extremal_best, 2.5);
  EXPECT_EQ(c.interior_best, 2.5);
}

TEST(MaximizeConvex, Errors) {
  EXPECT_THROW(maximize_convex(max_cell_functional(), 9), ConfigurationError);
  EXPECT_THROW(maximize_convex(max_cell_functional(), 0), ConfigurationError);
  const ConvexFunctional nan{"nan", ConvexFunctional::Declared::Convex,
                             [](const CheckerboardCopula&) { return std::nan(""); }};
  EXPECT_THROW(maximize_convex(nan, 3), EvaluationError);
}

TEST(MaximizeConvex, CountsMidpointViolationsForNonconvexFunctionals) {
  const ConvexFunctional concave{"neg_max", ConvexFunctional::Declared::Convex,
                                 [](const CheckerboardCopula& c) { return -c.mass().maxCoeff(); }};
  const auto res = maximize_convex(concave, 3, {100, 100, 4});
  EXPECT_GT(res.convexity_violations, 0u);
}
