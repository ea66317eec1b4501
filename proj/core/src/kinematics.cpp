#include "qcsync/kinematics.hpp"

#include "qcsync/errors.hpp"

namespace qcsync {

Length quantum_path_length(Time t, const MediumProfile& medium) {
  if (t <= Time{0}) {
    throw NonPositiveTime("transit time must be positive, got " + to_string(t));
  }
  return photon_velocity(medium).travel(t);
}

Length classical_path_length(Time t, std::span<const DelayElement> delays,
                             const MediumProfile& medium) {
  if (t <= Time{0}) {
    throw NonPositiveTime("transit time must be positive, got " + to_string(t));
  }
  Time in_fiber = t - total_delay(delays);
  if (in_fiber <= Time{0}) {
    throw DelayExceedsBudget("serial delays consume the whole transit time " +
                             to_string(t));
  }
  return fiber_velocity(medium).travel(in_fiber);
}

TransitTimes transit_times(const NodeLink& link, const MediumProfile& medium) {
  Time quantum = photon_velocity(medium).time_over(link.quantum_length);
  Time classical =
      fiber_velocity(medium).time_over(link.classical_length) + total_delay(link.delays);
  return TransitTimes{quantum, classical};
}

}  // namespace qcsync
