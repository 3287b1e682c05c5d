#include "copulim/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "copulim/errors.hpp"
#include "copulim/random_copula.hpp"

namespace copulim {

namespace {

constexpr double kSupportTol = 1e-13;

bool augment(int row, const RowMajorMatrix& P, std::vector<int>& match_of_col, std::vector<bool>& visited) {
  for (int col = 0; col < P.cols(); ++col) {
    if (P(row, col) <= kSupportTol || visited[static_cast<std::size_t>(col)]) continue;
    visited[static_cast<std::size_t>(col)] = true;
    if (match_of_col[static_cast<std::size_t>(col)] < 0 ||
        augment(match_of_col[static_cast<std::size_t>(col)], P, match_of_col, visited)) {
      match_of_col[static_cast<std::size_t>(col)] = row;
      return true;
    }
  }
  return false;
}

// Perfect matching inside the support of P, or empty if none exists.
Permutation support_matching(const RowMajorMatrix& P) {
  const int n = static_cast<int>(P.rows());
  std::vector<int> match_of_col(static_cast<std::size_t>(n), -1);
  for (int row = 0; row < n; ++row) {
    std::vector<bool> visited(static_cast<std::size_t>(n), false);
    if (!augment(row, P, match_of_col, visited)) return {};
  }
  Permutation perm(static_cast<std::size_t>(n));
  for (int col = 0; col < n; ++col) perm[static_cast<std::size_t>(match_of_col[static_cast<std::size_t>(col)])] = col;
  return perm;
}

}  // namespace

std::vector<BirkhoffTerm> birkhoff_decompose(const CheckerboardCopula& c) {
  if (c.rank() != 2) throw DimensionError("birkhoff_decompose: copula must be 2-dimensional");
  const int n = c.order();
  RowMajorMatrix P = c.matrix() * static_cast<double>(n);
  const double row_dev = (P.rowwise().sum().array() - 1.0).abs().maxCoeff();
  const double col_dev = (P.colwise().sum().array() - 1.0).abs().maxCoeff();
  if (P.minCoeff() < -1e-10 || row_dev > 1e-10 || col_dev > 1e-10)
    throw ValidationError("birkhoff_decompose: n * mass is not doubly stochastic");
  P = P.cwiseMax(0.0);

  std::vector<BirkhoffTerm> terms;
  const std::size_t max_terms = static_cast<std::size_t>(n * n - 2 * n + 2);
  while (P.maxCoeff() > kSupportTol && terms.size() < max_terms) {
    Permutation perm = support_matching(P);
    if (perm.empty()) break;
    double w = P(0, perm[0]);
    for (int r = 1; r < n; ++r) w = std::min(w, P(r, perm[static_cast<std::size_t>(r)]));
    for (int r = 0; r < n; ++r) {
      double& x = P(r, perm[static_cast<std::size_t>(r)]);
      x -= w;
      if (x <= kSupportTol) x = 0.0;
    }
    terms.push_back({w, std::move(perm)});
  }
  return terms;
}

CheckerboardCopula birkhoff_recompose(const IndexSubset& J, int n, const std::vector<BirkhoffTerm>& terms) {
  RowMajorMatrix m = RowMajorMatrix::Zero(n, n);
  for (const auto& t : terms)
    for (int r = 0; r < n; ++r) m(r, t.permutation[static_cast<std::size_t>(r)]) += t.weight / n;
  return from_matrix(J, m);
}

ConvexFunctional linear_functional(const RowMajorMatrix& weights, std::string name) {
  return {std::move(name), ConvexFunctional::Declared::Linear, [weights](const CheckerboardCopula& c) {
            if (c.order() != weights.rows()) throw DimensionError("linear functional: order mismatch");
            double s = 0.0;
            const auto m = c.matrix();
            for (Eigen::Index i = 0; i < m.rows(); ++i)
              for (Eigen::Index j = 0; j < m.cols(); ++j) s += weights(i, j) * m(i, j);
            return s;
          }};
}

ConvexFunctional max_cell_functional() {
  return {"max_cell", ConvexFunctional::Declared::Convex,
          [](const CheckerboardCopula& c) { return c.mass().maxCoeff(); }};
}

ConvexFunctional constant_functional(double value) {
  return {"constant", ConvexFunctional::Declared::Linear, [value](const CheckerboardCopula&) { return value; }};
}

namespace {

double checked(const ConvexFunctional& g, const CheckerboardCopula& c) {
  const double v = g.evaluate(c);
  if (!std::isfinite(v)) throw EvaluationError("functional '" + g.name + "' returned a non-finite value");
  return v;
}

}  // namespace

ExtremalResult maximize_convex(const ConvexFunctional& g, int n, const ExtremalConfig& cfg) {
  if (n < 1 || n > 8) throw ConfigurationError("maximize_convex: exhaustive mode supports orders 1..8");
  const IndexSubset J{0, 1};
  ExtremalResult result;

  Permutation perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  do {
    const double v = checked(g, make_permutation(J, perm));
    if (result.permutations_evaluated == 0 || v > result.extremal_best) {
      result.extremal_best = v;
      result.best_permutation = perm;
    }
    ++result.permutations_evaluated;
  } while (std::next_permutation(perm.begin(), perm.end()));

  Rng rng(cfg.seed);
  for (std::size_t s = 0; s < cfg.samples; ++s) {
    const double v = checked(g, random_copula(J, n, rng));
    if (s == 0 || v > result.interior_best) result.interior_best = v;
    ++result.interior_evaluated;
  }
  for (std::size_t s = 0; s < cfg.midpoint_checks; ++s) {
    const CheckerboardCopula a = random_copula(J, n, rng);
    const CheckerboardCopula b = random_copula(J, n, rng);
    const CheckerboardCopula mid(J, n, 0.5 * (a.mass() + b.mass()));
    if (checked(g, mid) > 0.5 * (checked(g, a) + checked(g, b)) + 1e-12) ++result.convexity_violations;
  }
  return result;
}

}  // namespace copulim
