#include "copulim/random_copula.hpp"

#include <algorithm>
#include <numeric>

#include "copulim/errors.hpp"

namespace copulim {

CheckerboardCopula fit_uniform_margins(const IndexSubset& J, int n, Eigen::VectorXd mass, double tol,
                                       int max_sweeps) {
  if ((mass.array() <= 0.0).any()) throw ValidationError("fit_uniform_margins: entries must be positive");
  CheckerboardCopula c(J, n, std::move(mass));
  const std::size_t d = c.rank();
  const double target = 1.0 / n;
  Eigen::VectorXd m = c.mass();
  const TensorShape& shape = c.shape();
  std::vector<std::size_t> axis_index(static_cast<std::size_t>(m.size()) * d);
  for_each_index(shape.extents(), [&](const std::vector<std::size_t>& cell) {
    const std::size_t f = shape.flat(cell);
    for (std::size_t a = 0; a < d; ++a) axis_index[f * d + a] = cell[a];
  });

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double worst = 0.0;
    for (std::size_t a = 0; a < d; ++a) {
      Eigen::VectorXd sums = Eigen::VectorXd::Zero(n);
      for (Eigen::Index f = 0; f < m.size(); ++f) sums[static_cast<Eigen::Index>(axis_index[static_cast<std::size_t>(f) * d + a])] += m[f];
      worst = std::max(worst, (sums.array() - target).abs().maxCoeff());
      const Eigen::VectorXd scale = (target / sums.array()).matrix();
      for (Eigen::Index f = 0; f < m.size(); ++f) m[f] *= scale[static_cast<Eigen::Index>(axis_index[static_cast<std::size_t>(f) * d + a])];
    }
    if (d == 1 || worst < tol) {
      CheckerboardCopula out(J, n, m);
      if (validate_copula(out, std::max(tol, kCopulaTolerance)).ok) return out;
    }
  }
  throw InternalError("fit_uniform_margins: no convergence");
}

CheckerboardCopula random_copula(const IndexSubset& J, int n, Rng& rng) {
  std::uniform_real_distribution<double> entry(0.05, 1.0);
  std::size_t cells = 1;
  for (std::size_t a = 0; a < J.size(); ++a) cells *= static_cast<std::size_t>(n);
  Eigen::VectorXd m(static_cast<Eigen::Index>(cells));
  for (Eigen::Index k = 0; k < m.size(); ++k) m[k] = entry(rng);
  return fit_uniform_margins(J, n, std::move(m));
}

std::vector<int> random_permutation(int n, Rng& rng) {
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  for (int k = n - 1; k > 0; --k) {
    std::uniform_int_distribution<int> pick(0, k);
    std::swap(p[static_cast<std::size_t>(k)], p[static_cast<std::size_t>(pick(rng))]);
  }
  return p;
}

}  // namespace copulim
