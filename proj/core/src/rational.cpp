#include "qcsync/rational.hpp"

#include <charconv>
#include <limits>

#include "int128_ops.hpp"
#include "qcsync/errors.hpp"

namespace qcsync {

namespace {

using detail::int128;

constexpr std::int64_t kInt64Max = std::numeric_limits<std::int64_t>::max();
constexpr std::int64_t kInt64Min = std::numeric_limits<std::int64_t>::min();

Rational make_reduced(int128 num, int128 den, const char* what) {
  if (den == 0) {
    throw ValidationError("rational denominator must be nonzero");
  }
  if (den < 0) {
    num = -num;
    den = -den;
  }
  int128 g = detail::gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Rational(detail::narrow128(num, what), detail::narrow128(den, what));
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) {
    throw ValidationError("rational denominator must be nonzero");
  }
  int128 n = num;
  int128 d = den;
  if (d < 0) {
    n = -n;
    d = -d;
  }
  int128 g = detail::gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  num_ = detail::narrow128(n, "rational");
  den_ = detail::narrow128(d, "rational");
}

Rational Rational::from_decimal(std::string_view text) {
  // [-]digits[.digits][(e|E)[+-]digits]
  auto fail = [&] {
    throw ParseError("not a decimal literal: '" + std::string(text) + "'");
  };
  if (text.empty()) fail();

  std::size_t pos = 0;
  bool negative = false;
  if (text[pos] == '+' || text[pos] == '-') {
    negative = text[pos] == '-';
    ++pos;
  }

  int128 mantissa = 0;
  int frac_digits = 0;
  bool any_digit = false;
  bool seen_dot = false;
  for (; pos < text.size(); ++pos) {
    char c = text[pos];
    if (c >= '0' && c <= '9') {
      mantissa = mantissa * 10 + (c - '0');
      if (mantissa > int128(kInt64Max) * 1000000000) fail();
      if (seen_dot) ++frac_digits;
      any_digit = true;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else if (c == 'e' || c == 'E') {
      break;
    } else {
      fail();
    }
  }
  if (!any_digit) fail();

  std::int64_t exponent = 0;
  if (pos < text.size()) {
    ++pos;  // past 'e'
    auto [end, ec] =
        std::from_chars(text.data() + pos, text.data() + text.size(), exponent);
    if (ec != std::errc{} || end != text.data() + text.size()) fail();
    if (exponent > 40 || exponent < -40) fail();
  }

  if (negative) mantissa = -mantissa;

  std::int64_t power = exponent - frac_digits;
  int128 num = mantissa;
  int128 den = 1;
  for (std::int64_t i = 0; i < power; ++i) {
    num *= 10;
    if (num > int128(kInt64Max) * 1000000000 || num < int128(kInt64Min) * 1000000000) fail();
  }
  for (std::int64_t i = 0; i < -power; ++i) {
    den *= 10;
    if (den > int128(kInt64Max) * 1000000000) fail();
  }
  return make_reduced(num, den, "decimal literal");
}

Rational Rational::from_double_decimal(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) {
    throw ParseError("cannot format double");
  }
  return from_decimal(std::string_view(buf, static_cast<std::size_t>(end - buf)));
}

Rational Rational::operator-() const {
  return make_reduced(-int128(num_), int128(den_), "rational negate");
}

Rational Rational::operator+(const Rational& rhs) const {
  return make_reduced(int128(num_) * rhs.den_ + int128(rhs.num_) * den_,
                      int128(den_) * rhs.den_, "rational add");
}

Rational Rational::operator-(const Rational& rhs) const {
  return make_reduced(int128(num_) * rhs.den_ - int128(rhs.num_) * den_,
                      int128(den_) * rhs.den_, "rational subtract");
}

Rational Rational::operator*(const Rational& rhs) const {
  return make_reduced(int128(num_) * rhs.num_, int128(den_) * rhs.den_, "rational multiply");
}

Rational Rational::operator/(const Rational& rhs) const {
  if (rhs.num_ == 0) {
    throw ValidationError("rational division by zero");
  }
  return make_reduced(int128(num_) * rhs.den_, int128(den_) * rhs.num_, "rational divide");
}

std::strong_ordering Rational::operator<=>(const Rational& rhs) const noexcept {
  int128 lhs_scaled = int128(num_) * rhs.den_;
  int128 rhs_scaled = int128(rhs.num_) * den_;
  if (lhs_scaled < rhs_scaled) return std::strong_ordering::less;
  if (lhs_scaled > rhs_scaled) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

double Rational::to_double() const {
  return static_cast<double>(num_) / static_cast<double>(den_);
}

std::int64_t round_half_away(const Rational& value) {
  return detail::narrow128(
      detail::div_round_half_away(int128(value.num()), int128(value.den())),
      "round_half_away");
}

}  // namespace qcsync
