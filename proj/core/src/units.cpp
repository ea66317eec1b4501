#include "qcsync/units.hpp"

#include "qcsync/errors.hpp"

namespace qcsync {

namespace detail {

std::int64_t checked_add(std::int64_t a, std::int64_t b, const char* what) {
  std::int64_t out;
  if (__builtin_add_overflow(a, b, &out)) {
    throw OverflowError(std::string(what) + ": 64-bit overflow");
  }
  return out;
}

std::int64_t checked_sub(std::int64_t a, std::int64_t b, const char* what) {
  std::int64_t out;
  if (__builtin_sub_overflow(a, b, &out)) {
    throw OverflowError(std::string(what) + ": 64-bit overflow");
  }
  return out;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b, const char* what) {
  std::int64_t out;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw OverflowError(std::string(what) + ": 64-bit overflow");
  }
  return out;
}

}  // namespace detail

Time Time::from_ns(std::int64_t ns) { return Time{detail::checked_mul(ns, 1'000, "ns to ps")}; }
Time Time::from_us(std::int64_t us) { return Time{detail::checked_mul(us, 1'000'000, "us to ps")}; }
Time Time::from_ms(std::int64_t ms) { return Time{detail::checked_mul(ms, 1'000'000'000, "ms to ps")}; }

Time Time::operator-() const { return Time{detail::checked_sub(0, ps, "time negate")}; }

Time& Time::operator+=(Time rhs) {
  ps = detail::checked_add(ps, rhs.ps, "time add");
  return *this;
}

Time& Time::operator-=(Time rhs) {
  ps = detail::checked_sub(ps, rhs.ps, "time subtract");
  return *this;
}

Time operator+(Time lhs, Time rhs) { return lhs += rhs; }
Time operator-(Time lhs, Time rhs) { return lhs -= rhs; }

std::string to_string(Time t) { return std::to_string(t.ps) + " ps"; }

Length Length::from_mm(std::int64_t mm) { return Length{detail::checked_mul(mm, 1'000, "mm to um")}; }
Length Length::from_m(std::int64_t m) { return Length{detail::checked_mul(m, 1'000'000, "m to um")}; }

Length Length::operator-() const { return Length{detail::checked_sub(0, um, "length negate")}; }

Length& Length::operator+=(Length rhs) {
  um = detail::checked_add(um, rhs.um, "length add");
  return *this;
}

Length& Length::operator-=(Length rhs) {
  um = detail::checked_sub(um, rhs.um, "length subtract");
  return *this;
}

Length operator+(Length lhs, Length rhs) { return lhs += rhs; }
Length operator-(Length lhs, Length rhs) { return lhs -= rhs; }

std::string to_string(Length l) { return std::to_string(l.um) + " um"; }

}  // namespace qcsync
