#pragma once

#include <cstddef>
#include <numeric>
#include <vector>

namespace copulim {

/// Row-major extents of a dense tensor stored flat; the last axis varies
/// fastest.
class TensorShape {
 public:
  TensorShape() = default;
  explicit TensorShape(std::vector<std::size_t> extents) : extents_(std::move(extents)) {
    strides_.assign(extents_.size(), 1);
    for (std::size_t a = extents_.size(); a-- > 1;) strides_[a - 1] = strides_[a] * extents_[a];
  }

  std::size_t rank() const { return extents_.size(); }
  std::size_t extent(std::size_t axis) const { return extents_[axis]; }
  std::size_t stride(std::size_t axis) const { return strides_[axis]; }
  const std::vector<std::size_t>& extents() const { return extents_; }
  std::size_t size() const {
    return std::accumulate(extents_.begin(), extents_.end(), std::size_t{1}, std::multiplies<>());
  }

  std::size_t flat(const std::vector<std::size_t>& idx) const {
    std::size_t f = 0;
    for (std::size_t a = 0; a < idx.size(); ++a) f += idx[a] * strides_[a];
    return f;
  }

  std::vector<std::size_t> unflatten(std::size_t f) const {
    std::vector<std::size_t> idx(extents_.size());
    for (std::size_t a = 0; a < extents_.size(); ++a) {
      idx[a] = f / strides_[a];
      f %= strides_[a];
    }
    return idx;
  }

  friend bool operator==(const TensorShape& a, const TensorShape& b) { return a.extents_ == b.extents_; }

 private:
  std::vector<std::size_t> extents_;
  std::vector<std::size_t> strides_;
};

/// Visits every multi-index of the box [0, bound[0]) x ... in row-major
/// order. `fn` receives the multi-index.
template <typename Fn>
void for_each_index(const std::vector<std::size_t>& bound, Fn&& fn) {
  for (std::size_t b : bound)
    if (b == 0) return;
  std::vector<std::size_t> idx(bound.size(), 0);
  while (true) {
    fn(static_cast<const std::vector<std::size_t>&>(idx));
    std::size_t a = bound.size();
    while (a > 0) {
      --a;
      if (++idx[a] < bound[a]) break;
      idx[a] = 0;
      if (a == 0) return;
    }
    if (bound.empty()) return;
  }
}

}  // namespace copulim
