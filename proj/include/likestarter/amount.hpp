#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace likestarter {

using u128 = unsigned __int128;

/// Atto-units per whole token or currency unit.
inline constexpr std::uint64_t kAttoPerUnit = 1'000'000'000'000'000'000ULL;

/// Non-negative quantity of atto-units (10^-18 of a whole token or of a whole
/// currency unit). Arithmetic is exact and checked: overflow throws
/// ErrorCode::Overflow instead of wrapping.
class Amount {
 public:
  constexpr Amount() = default;
  constexpr explicit Amount(u128 value) : value_(value) {}

  static Amount whole(std::uint64_t units);

  constexpr u128 value() const { return value_; }
  constexpr bool is_zero() const { return value_ == 0; }

  friend constexpr auto operator<=>(Amount, Amount) = default;

  Amount plus(Amount other) const;
  /// Throws Overflow on underflow; callers check their own preconditions first.
  Amount minus(Amount other) const;

  /// Decimal atto-unit string ("1000000000000000000" for one unit).
  std::string to_string() const;
  /// Whole-unit rendering with trailing fractional zeros trimmed ("0.01").
  std::string to_units_string() const;

  /// Parses a decimal atto-unit string. Digits only, no sign, no exponent.
  static Amount parse(std::string_view digits);
  /// Parses whole units with up to 18 fractional digits ("1.5", "0.01").
  /// More than 18 fractional digits is rejected, never rounded.
  static Amount parse_units(std::string_view text);

 private:
  u128 value_ = 0;
};

std::string u128_to_string(u128 value);

/// floor(a * b / c) and the remainder, computed in 256-bit precision.
struct MulDivResult {
  u128 quotient;
  u128 remainder;
};
MulDivResult mul_div(u128 a, u128 b, u128 c);

/// Three-way comparison of a * b against c * d without overflow.
std::strong_ordering compare_products(u128 a, u128 b, u128 c, u128 d);

/// Exact non-negative rational with 128-bit numerator and denominator, kept
/// in lowest terms. Used for exchange rates and quorum fractions.
class Ratio {
 public:
  constexpr Ratio() = default;
  Ratio(u128 num, u128 den);

  static Ratio one() { return Ratio(1, 1); }

  constexpr u128 num() const { return num_; }
  constexpr u128 den() const { return den_; }
  constexpr bool is_zero() const { return num_ == 0; }

  /// floor(amount * this).
  Amount apply_floor(Amount amount) const;

  friend bool operator==(const Ratio&, const Ratio&) = default;

  /// "1000", "0.1", "3/7".
  static Ratio parse(std::string_view text);
  /// Lowest-terms rendering: "1000" when the denominator is one, else "p/q".
  std::string to_string() const;

 private:
  u128 num_ = 0;
  u128 den_ = 1;
};

}  // namespace likestarter
