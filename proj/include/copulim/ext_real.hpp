#pragma once

#include <compare>
#include <limits>
#include <string>

namespace copulim {

/// A point of the extended real line [-inf, +inf].
///
/// Stored as an IEEE double; NaN is rejected on construction so the
/// natural order of doubles is a total order on the stored values.
class ExtReal {
 public:
  constexpr ExtReal() = default;
  ExtReal(double value);  // NOLINT(google-explicit-constructor)

  static constexpr ExtReal neg_inf() { return ExtReal(Raw{}, -std::numeric_limits<double>::infinity()); }
  static constexpr ExtReal pos_inf() { return ExtReal(Raw{}, std::numeric_limits<double>::infinity()); }

  constexpr double value() const { return value_; }
  constexpr bool is_finite() const {
    return value_ != std::numeric_limits<double>::infinity() &&
           value_ != -std::numeric_limits<double>::infinity();
  }
  constexpr bool is_neg_inf() const { return value_ == -std::numeric_limits<double>::infinity(); }
  constexpr bool is_pos_inf() const { return value_ == std::numeric_limits<double>::infinity(); }

  friend constexpr bool operator==(ExtReal a, ExtReal b) { return a.value_ == b.value_; }
  friend constexpr std::strong_ordering operator<=>(ExtReal a, ExtReal b) {
    if (a.value_ < b.value_) return std::strong_ordering::less;
    if (b.value_ < a.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  struct Raw {};
  constexpr ExtReal(Raw, double v) : value_(v) {}
  double value_ = 0.0;
};

/// Shortest decimal text that parses back to the same value; "-inf"/"+inf"
/// for the two infinite points.
std::string to_string(ExtReal x);

/// Inverse of to_string. Throws ParseError on malformed text.
ExtReal parse_ext_real(const std::string& text);

}  // namespace copulim
