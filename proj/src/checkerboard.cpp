#include "copulim/checkerboard.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "copulim/errors.hpp"

namespace copulim {

namespace {

TensorShape cube(std::size_t d, int n) { return TensorShape(std::vector<std::size_t>(d, static_cast<std::size_t>(n))); }

}  // namespace

CheckerboardCopula::CheckerboardCopula(IndexSubset J, int order, Eigen::VectorXd mass)
    : J_(std::move(J)), n_(order), mass_(std::move(mass)) {
  if (J_.empty()) throw IndexError("copula over an empty index subset");
  if (n_ < 1) throw DomainError("copula order must be at least 1");
  shape_ = cube(J_.size(), n_);
  if (static_cast<std::size_t>(mass_.size()) != shape_.size())
    throw IndexError("copula mass tensor must have n^d entries");
}

Eigen::Map<const RowMajorMatrix> CheckerboardCopula::matrix() const& {
  if (rank() != 2) throw DimensionError("matrix view requires a 2-dimensional copula");
  return Eigen::Map<const RowMajorMatrix>(mass_.data(), n_, n_);
}

CheckerboardCopula make_independence(const IndexSubset& J, int n) {
  const TensorShape shape = cube(J.size(), n);
  const double cell = std::pow(static_cast<double>(n), -static_cast<double>(J.size()));
  return CheckerboardCopula(J, n, Eigen::VectorXd::Constant(static_cast<Eigen::Index>(shape.size()), cell));
}

CheckerboardCopula make_comonotone(const IndexSubset& J, int n) {
  const TensorShape shape = cube(J.size(), n);
  Eigen::VectorXd mass = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(shape.size()));
  for (int k = 0; k < n; ++k)
    mass[static_cast<Eigen::Index>(shape.flat(std::vector<std::size_t>(J.size(), static_cast<std::size_t>(k))))] = 1.0 / n;
  return CheckerboardCopula(J, n, std::move(mass));
}

CheckerboardCopula make_countermonotone(const IndexSubset& J, int n) {
  if (J.size() != 2) throw DimensionError("countermonotone copula exists only in dimension 2");
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) perm[static_cast<std::size_t>(k)] = n - 1 - k;
  return make_permutation(J, perm);
}

CheckerboardCopula make_permutation(const IndexSubset& J, const std::vector<int>& perm) {
  if (J.size() != 2) throw DimensionError("permutation copulas are 2-dimensional");
  const int n = static_cast<int>(perm.size());
  RowMajorMatrix m = RowMajorMatrix::Zero(n, n);
  for (int k = 0; k < n; ++k) m(k, perm[static_cast<std::size_t>(k)]) = 1.0 / n;
  return from_matrix(J, m);
}

CheckerboardCopula from_matrix(const IndexSubset& J, const Eigen::Ref<const RowMajorMatrix>& mass) {
  if (J.size() != 2) throw DimensionError("from_matrix needs a 2-element index subset");
  if (mass.rows() != mass.cols()) throw IndexError("copula mass matrix must be square");
  Eigen::VectorXd flat(mass.size());
  Eigen::Map<RowMajorMatrix>(flat.data(), mass.rows(), mass.cols()) = mass;
  return CheckerboardCopula(J, static_cast<int>(mass.rows()), std::move(flat));
}

std::vector<Eigen::VectorXd> margin_sums(const CheckerboardCopula& c) {
  std::vector<Eigen::VectorXd> sums(c.rank(), Eigen::VectorXd::Zero(c.order()));
  for_each_index(c.shape().extents(), [&](const std::vector<std::size_t>& cell) {
    const double m = c.at(cell);
    for (std::size_t a = 0; a < cell.size(); ++a) sums[a][static_cast<Eigen::Index>(cell[a])] += m;
  });
  return sums;
}

CopulaReport validate_copula(const CheckerboardCopula& c, double tol) {
  CopulaReport report;
  for_each_index(c.shape().extents(), [&](const std::vector<std::size_t>& cell) {
    const double m = c.at(cell);
    if (!(m >= 0.0) || !std::isfinite(m))
      report.violations.push_back({CopulaViolation::Kind::NegativeMass, -1, cell, m, 0.0});
  });
  const double total = c.mass().sum();
  if (!(std::abs(total - 1.0) <= tol))
    report.violations.push_back({CopulaViolation::Kind::TotalMass, -1, {}, total, 1.0});
  const double target = 1.0 / c.order();
  const auto sums = margin_sums(c);
  for (std::size_t a = 0; a < sums.size(); ++a) {
    for (Eigen::Index k = 0; k < sums[a].size(); ++k) {
      const double dev = std::abs(sums[a][k] - target);
      report.max_margin_deviation = std::max(report.max_margin_deviation, dev);
      if (!(dev <= tol))
        report.violations.push_back(
            {CopulaViolation::Kind::Margin, static_cast<int>(a), {static_cast<std::size_t>(k)}, sums[a][k], target});
    }
  }
  report.ok = report.violations.empty();
  return report;
}

std::string CopulaReport::describe() const {
  if (ok) return "valid copula";
  std::ostringstream os;
  os.precision(17);
  for (const auto& v : violations) {
    switch (v.kind) {
      case CopulaViolation::Kind::NegativeMass:
        os << "negative mass " << v.value << " at cell (";
        for (std::size_t k = 0; k < v.cell.size(); ++k) os << (k ? "," : "") << v.cell[k] + 1;
        os << ")\n";
        break;
      case CopulaViolation::Kind::TotalMass:
        os << "total mass " << v.value << " differs from 1\n";
        break;
      case CopulaViolation::Kind::Margin:
        os << "margin of axis " << v.axis + 1 << " at cell " << v.cell[0] + 1 << " is " << v.value
           << ", expected " << v.expected << "\n";
        break;
    }
  }
  return os.str();
}

CheckerboardCopula marginalize_copula(const CheckerboardCopula& c, const IndexSubset& J1) {
  if (J1.empty()) throw IndexError("marginalize_copula: target subset is empty");
  if (!J1.is_subset_of(c.index_subset()))
    throw IndexError("marginalize_copula: " + to_string(J1) + " is not a subset of " + to_string(c.index_subset()));
  if (J1 == c.index_subset()) return c;
  std::vector<std::size_t> keep;
  for (Label l : J1) keep.push_back(*c.index_subset().position(l));
  const TensorShape out_shape = cube(J1.size(), c.order());
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(out_shape.size()));
  for_each_index(c.shape().extents(), [&](const std::vector<std::size_t>& cell) {
    std::size_t f = 0;
    for (std::size_t k = 0; k < keep.size(); ++k) f += cell[keep[k]] * out_shape.stride(k);
    out[static_cast<Eigen::Index>(f)] += c.at(cell);
  });
  return CheckerboardCopula(J1, c.order(), std::move(out));
}

double cdf_eval_copula(const CheckerboardCopula& c, const std::vector<double>& u) {
  if (u.size() != c.rank()) throw IndexError("cdf_eval_copula: point has the wrong dimension");
  const int n = c.order();
  std::vector<std::vector<double>> overlap(c.rank());
  std::vector<std::size_t> bound(c.rank());
  for (std::size_t a = 0; a < c.rank(); ++a) {
    if (!(u[a] >= 0.0 && u[a] <= 1.0)) throw DomainError("cdf_eval_copula: coordinates must lie in [0, 1]");
    const double scaled = u[a] * n;
    for (int k = 0; k < n; ++k) {
      const double f = std::clamp(scaled - k, 0.0, 1.0);
      if (f == 0.0) break;
      overlap[a].push_back(f);
    }
    bound[a] = overlap[a].size();
  }
  double total = 0.0;
  for_each_index(bound, [&](const std::vector<std::size_t>& cell) {
    double w = c.at(cell);
    for (std::size_t a = 0; a < cell.size(); ++a) w *= overlap[a][cell[a]];
    total += w;
  });
  return std::clamp(total, 0.0, 1.0);
}

TensorMeasure cell_center_measure(const CheckerboardCopula& c) {
  Axis axis;
  for (int k = 0; k < c.order(); ++k) axis.emplace_back((k + 0.5) / c.order());
  return TensorMeasure(c.index_subset(), Grid(c.rank(), axis), c.mass());
}

double max_abs_difference(const CheckerboardCopula& a, const CheckerboardCopula& b) {
  if (a.index_subset() != b.index_subset() || a.order() != b.order())
    throw IndexError("max_abs_difference: copulas have different shapes");
  return (a.mass() - b.mass()).cwiseAbs().maxCoeff();
}

}  // namespace copulim
