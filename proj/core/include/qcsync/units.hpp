#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace qcsync {

/// Signed time in integer picoseconds. Addition and subtraction are
/// overflow-checked; int64 covers roughly +/-9.2e18 ps.
struct Time {
  std::int64_t ps{0};

  static Time from_ns(std::int64_t ns);
  static Time from_us(std::int64_t us);
  static Time from_ms(std::int64_t ms);

  Time operator-() const;
  Time& operator+=(Time rhs);
  Time& operator-=(Time rhs);

  auto operator<=>(const Time&) const = default;
};

Time operator+(Time lhs, Time rhs);
Time operator-(Time lhs, Time rhs);
std::string to_string(Time t);

/// Signed length in integer micrometers. Installed fibers are
/// non-negative; planner intermediates may go negative.
struct Length {
  std::int64_t um{0};

  static Length from_mm(std::int64_t mm);
  static Length from_m(std::int64_t m);

  Length operator-() const;
  Length& operator+=(Length rhs);
  Length& operator-=(Length rhs);

  auto operator<=>(const Length&) const = default;
};

Length operator+(Length lhs, Length rhs);
Length operator-(Length lhs, Length rhs);
std::string to_string(Length l);

namespace detail {
std::int64_t checked_add(std::int64_t a, std::int64_t b, const char* what);
std::int64_t checked_sub(std::int64_t a, std::int64_t b, const char* what);
std::int64_t checked_mul(std::int64_t a, std::int64_t b, const char* what);
}  // namespace detail

}  // namespace qcsync
