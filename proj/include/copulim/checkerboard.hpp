#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "copulim/index_subset.hpp"
#include "copulim/tensor_measure.hpp"
#include "copulim/tensor_shape.hpp"

namespace copulim {

using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Copula measure on [0,1]^J with constant density on each of the n^d
/// cells prod_j ((k_j-1)/n, k_j/n]. Cell indices are 0-based here: entry
/// (k_1..k_d) is the box prod_j (k_j/n, (k_j+1)/n].
///
/// Construction only checks the shape; validate_copula reports whether the
/// masses actually form a copula.
class CheckerboardCopula {
 public:
  CheckerboardCopula(IndexSubset J, int order, Eigen::VectorXd mass);

  const IndexSubset& index_subset() const { return J_; }
  int order() const { return n_; }
  std::size_t rank() const { return J_.size(); }
  const Eigen::VectorXd& mass() const { return mass_; }
  const TensorShape& shape() const { return shape_; }
  double at(const std::vector<std::size_t>& cell) const { return mass_[static_cast<Eigen::Index>(shape_.flat(cell))]; }

  /// 2-d view: rows index the first label, columns the second.
  Eigen::Map<const RowMajorMatrix> matrix() const&;
  Eigen::Map<const RowMajorMatrix> matrix() const&& = delete;

  friend bool operator==(const CheckerboardCopula& a, const CheckerboardCopula& b) {
    return a.J_ == b.J_ && a.n_ == b.n_ && a.mass_ == b.mass_;
  }

 private:
  IndexSubset J_;
  int n_;
  Eigen::VectorXd mass_;
  TensorShape shape_;
};

CheckerboardCopula make_independence(const IndexSubset& J, int n);
CheckerboardCopula make_comonotone(const IndexSubset& J, int n);
/// Antidiagonal copula; DimensionError unless |J| = 2.
CheckerboardCopula make_countermonotone(const IndexSubset& J, int n);
/// 2-d copula with mass 1/n on cells (k, perm[k]).
CheckerboardCopula make_permutation(const IndexSubset& J, const std::vector<int>& perm);
/// Builds a 2-d copula from an n x n mass matrix.
CheckerboardCopula from_matrix(const IndexSubset& J, const Eigen::Ref<const RowMajorMatrix>& mass);

struct CopulaViolation {
  enum class Kind { NegativeMass, TotalMass, Margin };
  Kind kind;
  int axis = -1;                 // Margin only
  std::vector<std::size_t> cell; // NegativeMass: cell; Margin: {k}
  double value = 0.0;
  double expected = 0.0;
};

struct CopulaReport {
  bool ok = true;
  std::vector<CopulaViolation> violations;
  double max_margin_deviation = 0.0;
  std::string describe() const;
};

inline constexpr double kCopulaTolerance = 1e-12;

/// Checks nonnegativity, unit total mass and uniform margins. Never throws.
CopulaReport validate_copula(const CheckerboardCopula& c, double tol = kCopulaTolerance);

/// Per-axis margin sums, one vector of length n per axis.
std::vector<Eigen::VectorXd> margin_sums(const CheckerboardCopula& c);

CheckerboardCopula marginalize_copula(const CheckerboardCopula& c, const IndexSubset& J1);

/// C(prod_j [0, u_j]) with multilinear interpolation inside boundary cells.
double cdf_eval_copula(const CheckerboardCopula& c, const std::vector<double>& u);

/// Atomizes a checkerboard copula at cell centers, giving a TensorMeasure
/// on the grid {(k + 1/2)/n}.
TensorMeasure cell_center_measure(const CheckerboardCopula& c);

double max_abs_difference(const CheckerboardCopula& a, const CheckerboardCopula& b);

}  // namespace copulim
