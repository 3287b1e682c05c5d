#include "copulim/index_subset.hpp"

#include <algorithm>

#include "copulim/errors.hpp"

namespace copulim {

IndexSubset::IndexSubset(std::vector<Label> labels) : labels_(std::move(labels)) {
  std::sort(labels_.begin(), labels_.end());
  if (std::adjacent_find(labels_.begin(), labels_.end()) != labels_.end())
    throw IndexError("index subset contains a repeated label");
}

bool IndexSubset::contains(Label l) const { return std::binary_search(labels_.begin(), labels_.end(), l); }

bool IndexSubset::is_subset_of(const IndexSubset& other) const {
  return std::includes(other.labels_.begin(), other.labels_.end(), labels_.begin(), labels_.end());
}

std::optional<std::size_t> IndexSubset::position(Label l) const {
  auto it = std::lower_bound(labels_.begin(), labels_.end(), l);
  if (it == labels_.end() || *it != l) return std::nullopt;
  return static_cast<std::size_t>(it - labels_.begin());
}

std::string to_string(const IndexSubset& J) {
  std::string s = "{";
  for (std::size_t k = 0; k < J.size(); ++k) {
    if (k) s += ",";
    s += std::to_string(J[k]);
  }
  return s + "}";
}

bool canonical_less(const IndexSubset& a, const IndexSubset& b) {
  if (a.empty() || b.empty()) return a.size() < b.size();
  if (a.labels().back() != b.labels().back()) return a.labels().back() < b.labels().back();
  if (a.size() != b.size()) return a.size() < b.size();
  return a.labels() < b.labels();
}

}  // namespace copulim
