#pragma once

#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "copulim/checkerboard.hpp"
#include "copulim/index_subset.hpp"
#include "copulim/tensor_measure.hpp"

namespace copulim {

/// The index set I: either an explicit finite label list or the
/// nonnegative integers.
class IndexUniverse {
 public:
  static IndexUniverse finite(std::vector<Label> labels);
  static IndexUniverse countable() { return IndexUniverse(); }

  bool is_finite() const { return finite_; }
  bool contains(Label l) const;
  bool contains(const IndexSubset& J) const;
  /// Explicit labels; empty for a countable universe.
  const IndexSubset& labels() const { return labels_; }

  /// The first `count` nonempty finite subsets in canonical order (fewer
  /// if a finite universe runs out).
  std::vector<IndexSubset> canonical_subsets(std::size_t count) const;
  /// Every nonempty subset of the first m labels, canonically ordered.
  std::vector<IndexSubset> prefix_subsets(std::size_t m) const;

  friend bool operator==(const IndexUniverse&, const IndexUniverse&) = default;

 private:
  IndexUniverse() = default;
  Label nth_label(std::size_t k) const;
  bool finite_ = false;
  IndexSubset labels_;
};

/// A rule J -> X_J over the finite subsets of a universe, with the
/// marginalization maps as projections. Members are evaluated at most once
/// per subset, including under concurrent access; copies share the cache.
class ProjectiveFamily {
 public:
  enum class Kind { Copula, General };
  using Member = std::variant<TensorMeasure, CheckerboardCopula>;
  using Rule = std::function<Member(const IndexSubset&)>;

  ProjectiveFamily(IndexUniverse universe, Kind kind, Rule rule);

  const IndexUniverse& universe() const;
  Kind kind() const;

  /// rule(J), evaluated once and cached. IndexError for an empty subset or
  /// labels outside the universe; ConfigurationError/ValidationError when
  /// the rule breaks the member contract.
  const Member& member(const IndexSubset& J) const;
  const CheckerboardCopula& copula(const IndexSubset& J) const;
  const TensorMeasure& measure(const IndexSubset& J) const;

  /// Number of rule invocations made through member().
  std::size_t evaluations() const;

  /// Re-runs the rule on already cached subsets and throws ConsistencyError
  /// if any result differs from the cached value.
  void audit_determinism() const;

 private:
  struct State;
  std::shared_ptr<State> state_;
};

inline const ProjectiveFamily::Member& family_member(const ProjectiveFamily& f, const IndexSubset& J) {
  return f.member(J);
}

/// Deviation between two members over the same index subset: entrywise
/// when the representations share a grid, otherwise the sup distance of
/// the CDFs over the joint node set.
double member_deviation(const ProjectiveFamily::Member& a, const ProjectiveFamily::Member& b);

/// Projection P_{J1,J2}: marginalization of a member onto J1.
ProjectiveFamily::Member project(const ProjectiveFamily::Member& m, const IndexSubset& J1);

struct ConsistencyViolation {
  IndexSubset smaller;
  IndexSubset larger;
  double deviation = 0.0;
};

struct ConsistencyReport {
  bool consistent = true;
  double max_deviation = 0.0;
  std::size_t pairs_checked = 0;
  std::vector<ConsistencyViolation> violations;
};

/// For every pair J1 subset-of J2 among `subsets`, compares
/// project(member(J2), J1) with member(J1).
ConsistencyReport check_consistency(const ProjectiveFamily& f, const std::vector<IndexSubset>& subsets,
                                    double tol = 1e-12);

ProjectiveFamily family_from_joint(const TensorMeasure& t);
ProjectiveFamily family_from_copula(const CheckerboardCopula& c);
ProjectiveFamily independence_family(IndexUniverse universe, int n);
ProjectiveFamily comonotone_family(IndexUniverse universe, int n);

}  // namespace copulim
