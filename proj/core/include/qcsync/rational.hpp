#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace qcsync {

/// Exact signed rational over int64 numerator / denominator.
///
/// Always stored reduced with a positive denominator, so memberwise
/// equality is value equality. Intermediate products run in 128-bit
/// arithmetic; a result that does not fit int64 raises OverflowError
/// rather than wrapping.
class Rational {
public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den);

  static Rational from_int(std::int64_t v) { return Rational(v, 1); }

  /// Parses a decimal literal: "1.25", "-3", "3e8", "2.5e-3".
  static Rational from_decimal(std::string_view text);

  /// Shortest round-trip decimal form of v, fed through from_decimal,
  /// so 1.3 becomes 13/10 rather than the binary expansion.
  static Rational from_double_decimal(double v);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }

  bool is_zero() const noexcept { return num_ == 0; }
  bool is_negative() const noexcept { return num_ < 0; }
  bool is_positive() const noexcept { return num_ > 0; }

  Rational operator-() const;
  Rational operator+(const Rational& rhs) const;
  Rational operator-(const Rational& rhs) const;
  Rational operator*(const Rational& rhs) const;
  Rational operator/(const Rational& rhs) const;

  bool operator==(const Rational& rhs) const noexcept = default;
  std::strong_ordering operator<=>(const Rational& rhs) const noexcept;

  /// "5/4", or just "5" when the denominator is 1.
  std::string str() const;
  double to_double() const;

private:
  std::int64_t num_{0};
  std::int64_t den_{1};
};

/// Nearest integer, ties rounded away from zero: 3/2 -> 2, -3/2 -> -2.
std::int64_t round_half_away(const Rational& value);

}  // namespace qcsync
