#pragma once

// Exact fixed-point quantities. Money and Clicks are stored as integer
// micro-units; their products (expected spend, value, profit) are "micro2"
// integers held in a 128-bit type, 10^12 per currency unit.

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace broadbid {

using Wide = __int128;

inline constexpr std::int64_t kMicrosPerUnit = 1'000'000;
inline constexpr double kMicro2PerUnit = 1e12;

// Parses an optionally signed decimal with at most `max_fraction_digits`
// fractional digits into an integer count of 10^-max_fraction_digits units.
// Throws ParseError.
std::int64_t parse_fixed(std::string_view text, int max_fraction_digits = 6);

// Shortest decimal rendering of `scaled / 10^fraction_digits`.
std::string format_fixed(Wide scaled, int fraction_digits);

std::string wide_to_string(Wide value);

class Money {
 public:
  constexpr Money() = default;
  static constexpr Money from_micros(std::int64_t micros) { return Money(micros); }
  static Money parse(std::string_view text) { return Money(parse_fixed(text)); }
  // Nearest micro-unit; for generators only.
  static Money from_double(double units);

  constexpr std::int64_t micros() const { return micros_; }
  double to_double() const { return static_cast<double>(micros_) / kMicrosPerUnit; }
  std::string to_string() const { return format_fixed(micros_, 6); }

  friend constexpr Money operator+(Money a, Money b) { return Money(a.micros_ + b.micros_); }
  friend constexpr Money operator-(Money a, Money b) { return Money(a.micros_ - b.micros_); }
  friend constexpr auto operator<=>(Money, Money) = default;

 private:
  constexpr explicit Money(std::int64_t micros) : micros_(micros) {}
  std::int64_t micros_ = 0;
};

class Clicks {
 public:
  constexpr Clicks() = default;
  static Clicks from_micros(std::int64_t micros);
  static Clicks parse(std::string_view text);
  static Clicks from_double(double clicks);

  constexpr std::int64_t micros() const { return micros_; }
  double to_double() const { return static_cast<double>(micros_) / kMicrosPerUnit; }
  std::string to_string() const { return format_fixed(micros_, 6); }

  friend constexpr auto operator<=>(Clicks, Clicks) = default;

 private:
  constexpr explicit Clicks(std::int64_t micros) : micros_(micros) {}
  std::int64_t micros_ = 0;
};

// price * clicks in micro2 units.
inline Wide times(Money price, Clicks clicks) {
  return static_cast<Wide>(price.micros()) * clicks.micros();
}

inline double micro2_to_double(Wide amount) {
  return static_cast<double>(amount) / kMicro2PerUnit;
}

inline Wide money_to_micro2(Money amount) {
  return static_cast<Wide>(amount.micros()) * kMicrosPerUnit;
}

inline std::string format_micro2(Wide amount) { return format_fixed(amount, 12); }

}  // namespace broadbid
