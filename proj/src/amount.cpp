#include "likestarter/amount.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include <boost/multiprecision/cpp_int.hpp>

#include "likestarter/errors.hpp"

namespace likestarter {

namespace {

using boost::multiprecision::uint256_t;

constexpr u128 kU128Max = ~u128{0};

uint256_t widen(u128 v) {
  uint256_t r = static_cast<std::uint64_t>(v >> 64);
  r <<= 64;
  r |= static_cast<std::uint64_t>(v);
  return r;
}

u128 narrow(const uint256_t& v) {
  if (v > widen(kU128Max)) fail(ErrorCode::Overflow, "value exceeds 128 bits");
  const auto hi = static_cast<std::uint64_t>(v >> 64);
  const auto lo = static_cast<std::uint64_t>(v & std::numeric_limits<std::uint64_t>::max());
  return (u128{hi} << 64) | lo;
}

u128 parse_digits(std::string_view digits, ErrorCode on_error) {
  if (digits.empty()) fail(on_error, "empty number");
  u128 value = 0;
  for (char ch : digits) {
    if (ch < '0' || ch > '9') fail(on_error, "not a decimal digit string: '" + std::string(digits) + "'");
    const u128 d = static_cast<u128>(ch - '0');
    if (value > (kU128Max - d) / 10) fail(ErrorCode::Overflow, "number exceeds 128 bits");
    value = value * 10 + d;
  }
  return value;
}

u128 gcd128(u128 a, u128 b) {
  while (b != 0) {
    const u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

std::string u128_to_string(u128 value) {
  if (value == 0) return "0";
  std::string out;
  while (value != 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
    value /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

Amount Amount::whole(std::uint64_t units) {
  return Amount(mul_div(units, kAttoPerUnit, 1).quotient);
}

Amount Amount::plus(Amount other) const {
  if (value_ > kU128Max - other.value_) fail(ErrorCode::Overflow, "amount overflow");
  return Amount(value_ + other.value_);
}

Amount Amount::minus(Amount other) const {
  if (other.value_ > value_) fail(ErrorCode::Overflow, "amount underflow");
  return Amount(value_ - other.value_);
}

std::string Amount::to_string() const { return u128_to_string(value_); }

std::string Amount::to_units_string() const {
  std::string whole_part = u128_to_string(value_ / kAttoPerUnit);
  const u128 frac = value_ % kAttoPerUnit;
  if (frac == 0) return whole_part;
  std::string frac_str = u128_to_string(frac);
  frac_str.insert(0, 18 - frac_str.size(), '0');
  while (frac_str.back() == '0') frac_str.pop_back();
  return whole_part + "." + frac_str;
}

Amount Amount::parse(std::string_view digits) {
  return Amount(parse_digits(digits, ErrorCode::ValidationError));
}

Amount Amount::parse_units(std::string_view text) {
  const auto dot = text.find('.');
  const std::string_view int_part = text.substr(0, dot);
  std::string_view frac_part;
  if (dot != std::string_view::npos) {
    frac_part = text.substr(dot + 1);
    if (frac_part.empty()) fail(ErrorCode::ValidationError, "missing digits after decimal point");
    if (frac_part.size() > 18) {
      fail(ErrorCode::ValidationError, "more than 18 fractional digits: '" + std::string(text) + "'");
    }
  }
  const u128 units = int_part.empty() && !frac_part.empty()
                         ? 0
                         : parse_digits(int_part, ErrorCode::ValidationError);
  u128 frac = 0;
  if (!frac_part.empty()) {
    std::string padded(frac_part);
    padded.append(18 - frac_part.size(), '0');
    frac = parse_digits(padded, ErrorCode::ValidationError);
  }
  return Amount(mul_div(units, kAttoPerUnit, 1).quotient).plus(Amount(frac));
}

MulDivResult mul_div(u128 a, u128 b, u128 c) {
  if (c == 0) fail(ErrorCode::ValidationError, "division by zero");
  u128 small = 0;
  if (!__builtin_mul_overflow(a, b, &small)) return MulDivResult{small / c, small % c};
  uint256_t q, r;
  boost::multiprecision::divide_qr(widen(a) * widen(b), widen(c), q, r);
  return MulDivResult{narrow(q), narrow(r)};
}

std::strong_ordering compare_products(u128 a, u128 b, u128 c, u128 d) {
  const uint256_t lhs = widen(a) * widen(b);
  const uint256_t rhs = widen(c) * widen(d);
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Ratio::Ratio(u128 num, u128 den) : num_(num), den_(den) {
  if (den_ == 0) fail(ErrorCode::ValidationError, "ratio denominator is zero");
  const u128 g = gcd128(num_, den_);
  if (g > 1) {
    num_ /= g;
    den_ /= g;
  }
  if (num_ == 0) den_ = 1;
}

Amount Ratio::apply_floor(Amount amount) const {
  return Amount(mul_div(amount.value(), num_, den_).quotient);
}

Ratio Ratio::parse(std::string_view text) {
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    return Ratio(parse_digits(text.substr(0, slash), ErrorCode::ValidationError),
                 parse_digits(text.substr(slash + 1), ErrorCode::ValidationError));
  }
  // Decimal: scale by 10^18 so every accepted literal is exact.
  return Ratio(Amount::parse_units(text).value(), kAttoPerUnit);
}

std::string Ratio::to_string() const {
  if (den_ == 1) return u128_to_string(num_);
  return u128_to_string(num_) + "/" + u128_to_string(den_);
}

}  // namespace likestarter
