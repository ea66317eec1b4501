// Internal 128-bit helpers shared by the arithmetic-heavy translation units.
#pragma once

#include <cstdint>
#include <limits>
#include <string>

#include "qcsync/errors.hpp"

namespace qcsync::detail {

using int128 = __int128;

inline std::int64_t narrow128(int128 v, const char* what) {
  if (v > int128(std::numeric_limits<std::int64_t>::max()) ||
      v < int128(std::numeric_limits<std::int64_t>::min())) {
    throw OverflowError(std::string(what) + ": value exceeds 64-bit range");
  }
  return static_cast<std::int64_t>(v);
}

inline int128 gcd128(int128 a, int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

/// Nearest integer to num/den with ties away from zero; requires den > 0.
/// Works off quotient and remainder so nothing here can overflow, even for
/// num at the extremes of int128.
inline int128 div_round_half_away(int128 num, int128 den) {
  int128 q = num / den;
  int128 r = num % den;  // same sign as num, |r| < den
  if (r >= 0) {
    if (2 * r >= den) ++q;
  } else {
    if (-2 * r >= den) --q;
  }
  return q;
}

}  // namespace qcsync::detail
