#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

namespace copulim {

using Label = std::int64_t;

/// A finite set of index labels, always held in ascending order.
/// Axis k of any tensor over this subset belongs to the k-th label.
class IndexSubset {
 public:
  IndexSubset() = default;
  IndexSubset(std::initializer_list<Label> labels) : IndexSubset(std::vector<Label>(labels)) {}
  explicit IndexSubset(std::vector<Label> labels);

  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }
  Label operator[](std::size_t k) const { return labels_[k]; }
  auto begin() const { return labels_.begin(); }
  auto end() const { return labels_.end(); }
  const std::vector<Label>& labels() const { return labels_; }

  bool contains(Label l) const;
  bool is_subset_of(const IndexSubset& other) const;
  /// Axis position of a label, if present.
  std::optional<std::size_t> position(Label l) const;

  friend bool operator==(const IndexSubset&, const IndexSubset&) = default;
  friend auto operator<=>(const IndexSubset& a, const IndexSubset& b) { return a.labels_ <=> b.labels_; }

 private:
  std::vector<Label> labels_;
};

std::string to_string(const IndexSubset& J);

/// Canonical order on finite subsets: by largest label, then size, then
/// lexicographically.
bool canonical_less(const IndexSubset& a, const IndexSubset& b);

}  // namespace copulim
