#include "copulim/sklar.hpp"

#include <algorithm>
#include <cmath>

#include "copulim/errors.hpp"

namespace copulim {

namespace {

// Applies W (rows x extent) along `axis` of a flat row-major tensor.
Eigen::VectorXd mode_product(const Eigen::VectorXd& in, const std::vector<std::size_t>& extents, std::size_t axis,
                             const RowMajorMatrix& W) {
  std::size_t left = 1, right = 1;
  for (std::size_t a = 0; a < axis; ++a) left *= extents[a];
  for (std::size_t a = axis + 1; a < extents.size(); ++a) right *= extents[a];
  const auto ext = static_cast<Eigen::Index>(extents[axis]);
  const auto r = static_cast<Eigen::Index>(right);
  Eigen::VectorXd out(static_cast<Eigen::Index>(left) * W.rows() * r);
  for (std::size_t l = 0; l < left; ++l) {
    Eigen::Map<const RowMajorMatrix> slice(in.data() + static_cast<Eigen::Index>(l) * ext * r, ext, r);
    Eigen::Map<RowMajorMatrix> target(out.data() + static_cast<Eigen::Index>(l) * W.rows() * r, W.rows(), r);
    target.noalias() = W * slice;
  }
  return out;
}

// transfer(a, c): fraction of copula cell c (along one axis) whose quantile
// image is atom a of m.
RowMajorMatrix quantile_transfer(const Marginal& m, int n) {
  std::vector<double> cuts;
  for (int k = 0; k <= n; ++k) cuts.push_back(static_cast<double>(k) / n);
  cuts.insert(cuts.end(), m.cumulative().begin(), m.cumulative().end());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  RowMajorMatrix W = RowMajorMatrix::Zero(static_cast<Eigen::Index>(m.atoms().size()), n);
  for (std::size_t r = 1; r < cuts.size(); ++r) {
    const double lo = cuts[r - 1], hi = cuts[r];
    const std::size_t atom = quantile_index(m, hi);
    const int cell = std::clamp(static_cast<int>(std::floor(0.5 * (lo + hi) * n)), 0, n - 1);
    W(static_cast<Eigen::Index>(atom), cell) += (hi - lo) * n;
  }
  return W;
}

}  // namespace

const Marginal& JointMeasure::marginal(Label l) const {
  auto it = marginals.find(l);
  if (it == marginals.end()) throw ConfigurationError("no marginal supplied for label " + std::to_string(l));
  return it->second;
}

JointMeasure compose(ProjectiveFamily copula, std::map<Label, Marginal> marginals) {
  if (copula.kind() != ProjectiveFamily::Kind::Copula) throw ConfigurationError("compose needs a copula family");
  if (copula.universe().is_finite()) {
    for (Label l : copula.universe().labels())
      if (!marginals.count(l)) throw ConfigurationError("no marginal supplied for label " + std::to_string(l));
  }
  return JointMeasure{std::move(copula), std::move(marginals)};
}

double joint_cdf(const JointMeasure& jm, const IndexSubset& J, const std::vector<ExtReal>& x) {
  if (x.size() != J.size()) throw IndexError("joint_cdf: point has the wrong dimension");
  const CheckerboardCopula& c = jm.copula.copula(J);
  // A one-dimensional copula is the uniform law, so C(F(x)) = F(x).
  if (J.size() == 1) return cdf_eval(jm.marginal(J[0]), x[0]);
  std::vector<double> u(J.size());
  for (std::size_t a = 0; a < J.size(); ++a) u[a] = cdf_eval(jm.marginal(J[a]), x[a]);
  return cdf_eval_copula(c, u);
}

Marginal discretized_marginal(const JointMeasure& jm, Label l, const GridMap& grids) {
  const Marginal& m = jm.marginal(l);
  if (m.is_atomic()) return m;
  auto it = grids.find(l);
  if (it == grids.end())
    throw ConfigurationError("label " + std::to_string(l) + " has a continuous marginal but no discretization grid");
  return atomize(m, it->second);
}

TensorMeasure discretize_joint(const JointMeasure& jm, const IndexSubset& J, const GridMap& grids) {
  const CheckerboardCopula& c = jm.copula.copula(J);
  if (J.size() == 1) return TensorMeasure::from_marginal(J[0], discretized_marginal(jm, J[0], grids));
  const int n = c.order();
  Eigen::VectorXd mass = c.mass();
  std::vector<std::size_t> extents(J.size(), static_cast<std::size_t>(n));
  Grid grid;
  for (std::size_t a = 0; a < J.size(); ++a) {
    const Marginal m = discretized_marginal(jm, J[a], grids);
    mass = mode_product(mass, extents, a, quantile_transfer(m, n));
    extents[a] = m.atoms().size();
    Axis axis;
    for (const Atom& atom : m.atoms()) axis.push_back(atom.x);
    grid.push_back(std::move(axis));
  }
  // Products of nonnegative terms; clear signed zeros left by rounding.
  mass = mass.cwiseMax(0.0);
  return TensorMeasure(J, std::move(grid), std::move(mass));
}

ProjectiveFamily joint_family(const JointMeasure& jm, GridMap grids) {
  return ProjectiveFamily(jm.copula.universe(), ProjectiveFamily::Kind::General,
                          [jm, grids = std::move(grids)](const IndexSubset& J) -> ProjectiveFamily::Member {
                            return discretize_joint(jm, J, grids);
                          });
}

SklarReport verify_sklar(const JointMeasure& jm, const IndexSubset& J, const std::vector<std::vector<ExtReal>>& probes,
                         const GridMap& grids) {
  const TensorMeasure eager = discretize_joint(jm, J, grids);
  SklarReport report;
  for (const auto& x : probes) {
    const double dev = std::abs(joint_cdf(jm, J, x) - cdf_eval_tensor(eager, x));
    ++report.probes;
    if (dev > report.max_deviation || report.worst_probe.empty()) {
      report.max_deviation = std::max(report.max_deviation, dev);
      report.worst_probe = x;
    }
  }
  return report;
}

SklarReport verify_sklar(const JointMeasure& jm, const IndexSubset& J, const GridMap& grids) {
  const TensorMeasure eager = discretize_joint(jm, J, grids);
  std::vector<std::vector<ExtReal>> probes;
  std::vector<std::size_t> bound;
  for (const Axis& ax : eager.grid()) bound.push_back(ax.size());
  for_each_index(bound, [&](const std::vector<std::size_t>& idx) {
    std::vector<ExtReal> x(idx.size());
    for (std::size_t a = 0; a < idx.size(); ++a) x[a] = eager.axis(a)[idx[a]];
    probes.push_back(std::move(x));
  });
  return verify_sklar(jm, J, probes, grids);
}

namespace {

void check_decomposable(const TensorMeasure& t, const std::vector<Marginal>& marginals) {
  if (marginals.size() != t.rank()) throw ConfigurationError("decompose: one marginal per axis required");
  for (std::size_t a = 0; a < marginals.size(); ++a) {
    if (marginals[a].is_atomic())
      throw UnsupportedError(
          "decompose: the marginal of axis " + std::to_string(a + 1) +
          " is atomic; with discontinuous marginals the copula is not unique, so there is nothing canonical to recover");
  }
  for (std::size_t a = 0; a < marginals.size(); ++a) {
    const Marginal axis = t.axis_marginal(a);
    for (std::size_t k = 0; k < axis.atoms().size(); ++k) {
      const double F = cdf_eval(marginals[a], axis.atoms()[k].x);
      if (std::abs(F - axis.cumulative()[k]) > kMarginalConsistencyTolerance)
        throw ConsistencyError("decompose: axis " + std::to_string(a + 1) + " of the joint does not have the supplied marginal (at " +
                               to_string(axis.atoms()[k].x) + ")");
    }
  }
}

bool on_lattice(double u, int n, int* k) {
  const double s = u * n;
  const double r = std::round(s);
  if (std::abs(s - r) <= kMarginalConsistencyTolerance * n) {
    *k = static_cast<int>(r);
    return true;
  }
  return false;
}

bool order_is_compatible(const std::vector<std::vector<double>>& images, int n) {
  for (const auto& axis : images) {
    std::vector<bool> hit(static_cast<std::size_t>(n) + 1, false);
    hit[0] = true;
    for (double u : axis) {
      int k = 0;
      if (on_lattice(u, n, &k)) hit[static_cast<std::size_t>(k)] = true;
    }
    if (std::find(hit.begin(), hit.end(), false) != hit.end()) return false;
  }
  return true;
}

std::vector<std::vector<double>> cdf_images(const TensorMeasure& t, const std::vector<Marginal>& marginals) {
  std::vector<std::vector<double>> images(t.rank());
  for (std::size_t a = 0; a < t.rank(); ++a)
    for (ExtReal x : t.axis(a)) images[a].push_back(cdf_eval(marginals[a], x));
  return images;
}

}  // namespace

std::vector<int> compatible_orders(const TensorMeasure& t, const std::vector<Marginal>& marginals, int max_order) {
  const auto images = cdf_images(t, marginals);
  std::vector<int> out;
  for (int n = 1; n <= max_order; ++n)
    if (order_is_compatible(images, n)) out.push_back(n);
  return out;
}

CheckerboardCopula decompose(const TensorMeasure& t, const std::vector<Marginal>& marginals, int n) {
  if (n < 1) throw DomainError("decompose: order must be at least 1");
  check_decomposable(t, marginals);
  const auto images = cdf_images(t, marginals);
  if (!order_is_compatible(images, n)) {
    std::string msg = "decompose: order " + std::to_string(n) +
                      " is incompatible with the CDF images of the grid; compatible orders up to 64:";
    for (int k : compatible_orders(t, marginals, 64)) msg += " " + std::to_string(k);
    throw ConfigurationError(msg);
  }

  // Push through x -> F(x) and bin each image point u into the cell
  // ((k-1)/n, k/n] containing it.
  std::vector<Axis> maps(t.rank());
  for (std::size_t a = 0; a < t.rank(); ++a)
    for (double u : images[a]) maps[a].emplace_back(u);
  const TensorMeasure pushed = pushforward_tensor(t, maps);

  std::vector<std::vector<std::size_t>> cell_of(t.rank());
  for (std::size_t a = 0; a < t.rank(); ++a) {
    for (ExtReal v : pushed.axis(a)) {
      int k = 0;
      const double u = v.value();
      const int cell = on_lattice(u, n, &k) ? std::max(k, 1) - 1 : static_cast<int>(std::floor(u * n));
      cell_of[a].push_back(static_cast<std::size_t>(std::clamp(cell, 0, n - 1)));
    }
  }
  const TensorShape out_shape(std::vector<std::size_t>(t.rank(), static_cast<std::size_t>(n)));
  Eigen::VectorXd mass = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(out_shape.size()));
  for_each_index(pushed.shape().extents(), [&](const std::vector<std::size_t>& idx) {
    std::size_t f = 0;
    for (std::size_t a = 0; a < idx.size(); ++a) f += cell_of[a][idx[a]] * out_shape.stride(a);
    mass[static_cast<Eigen::Index>(f)] += pushed.at(idx);
  });
  return CheckerboardCopula(t.index_subset(), n, std::move(mass));
}

}  // namespace copulim
