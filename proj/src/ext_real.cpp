#include "copulim/ext_real.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

#include "copulim/errors.hpp"

namespace copulim {

ExtReal::ExtReal(double value) : value_(value) {
  if (std::isnan(value)) throw DomainError("ExtReal: NaN is not a point of the extended real line");
}

std::string to_string(ExtReal x) {
  if (x.is_neg_inf()) return "-inf";
  if (x.is_pos_inf()) return "+inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x.value());
  if (ec != std::errc()) throw InternalError("to_chars failed");
  return std::string(buf, end);
}

ExtReal parse_ext_real(const std::string& text) {
  if (text == "-inf") return ExtReal::neg_inf();
  if (text == "+inf" || text == "inf") return ExtReal::pos_inf();
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || std::isnan(v) || std::isinf(v))
    throw ParseError("not an extended real: '" + text + "'");
  return ExtReal(v);
}

}  // namespace copulim
