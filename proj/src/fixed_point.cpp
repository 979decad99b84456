#include "broadbid/fixed_point.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "broadbid/errors.hpp"

namespace broadbid {

std::int64_t parse_fixed(std::string_view text, int max_fraction_digits) {
  const std::string original(text);
  if (text.empty()) throw ParseError("empty decimal");
  bool negative = false;
  if (text.front() == '-') {
    negative = true;
    text.remove_prefix(1);
  }
  const auto dot = text.find('.');
  std::string_view whole = text.substr(0, dot);
  std::string_view fraction =
      dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
  if (whole.empty() || (dot != std::string_view::npos && fraction.empty())) {
    throw ParseError("malformed decimal '" + original + "'");
  }
  if (static_cast<int>(fraction.size()) > max_fraction_digits) {
    throw ParseError("more than " + std::to_string(max_fraction_digits) +
                     " fractional digits in '" + original + "'");
  }
  Wide value = 0;
  constexpr Wide kLimit = std::numeric_limits<std::int64_t>::max();
  auto push = [&](char ch) {
    if (ch < '0' || ch > '9') throw ParseError("malformed decimal '" + original + "'");
    value = value * 10 + (ch - '0');
    if (value > kLimit) throw ParseError("decimal out of range '" + original + "'");
  };
  for (char ch : whole) push(ch);
  for (char ch : fraction) push(ch);
  for (int i = static_cast<int>(fraction.size()); i < max_fraction_digits; ++i) push('0');
  return static_cast<std::int64_t>(negative ? -value : value);
}

std::string wide_to_string(Wide value) {
  if (value == 0) return "0";
  const bool negative = value < 0;
  std::string digits;
  while (value != 0) {
    const int digit = static_cast<int>(value % 10);
    digits.push_back(static_cast<char>('0' + (negative ? -digit : digit)));
    value /= 10;
  }
  if (negative) digits.push_back('-');
  std::reverse(digits.begin(), digits.end());
  return digits;
}

std::string format_fixed(Wide scaled, int fraction_digits) {
  const bool negative = scaled < 0;
  std::string digits = wide_to_string(negative ? -scaled : scaled);
  if (static_cast<int>(digits.size()) <= fraction_digits) {
    digits.insert(0, static_cast<std::size_t>(fraction_digits) + 1 - digits.size(), '0');
  }
  std::string whole = digits.substr(0, digits.size() - fraction_digits);
  std::string fraction = digits.substr(digits.size() - fraction_digits);
  while (!fraction.empty() && fraction.back() == '0') fraction.pop_back();
  std::string out = negative ? "-" : "";
  out += whole;
  if (!fraction.empty()) out += "." + fraction;
  return out;
}

Money Money::from_double(double units) {
  return Money(static_cast<std::int64_t>(std::llround(units * kMicrosPerUnit)));
}

Clicks Clicks::from_micros(std::int64_t micros) {
  if (micros < 0) throw ValidationError("negative clicks");
  return Clicks(micros);
}

Clicks Clicks::parse(std::string_view text) { return from_micros(parse_fixed(text)); }

Clicks Clicks::from_double(double clicks) {
  return from_micros(static_cast<std::int64_t>(std::llround(clicks * kMicrosPerUnit)));
}

}  // namespace broadbid
