#include "qcsync/link.hpp"

namespace qcsync {

Time total_delay(std::span<const DelayElement> delays) {
  Time sum{0};
  for (const DelayElement& d : delays) {
    sum += d.duration;
  }
  return sum;
}

}  // namespace qcsync
