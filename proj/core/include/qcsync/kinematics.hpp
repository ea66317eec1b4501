#pragma once

#include "qcsync/link.hpp"
#include "qcsync/medium.hpp"

#include <span>

namespace qcsync {

/// PMF length a photon covers in time t: t * v_p.
/// Throws NonPositiveTime for t <= 0.
Length quantum_path_length(Time t, const MediumProfile& medium);

/// Fiber length a photon covers in time t after spending the serial delays:
/// (t - sum of delays) * v_f. Throws DelayExceedsBudget when the delays
/// consume the whole budget.
Length classical_path_length(Time t, std::span<const DelayElement> delays,
                             const MediumProfile& medium);

struct TransitTimes {
  Time quantum;
  Time classical;

  bool operator==(const TransitTimes&) const = default;
};

/// Inverse of the two length formulas: arrival times over both channels of
/// a link. quantum = quantum_length / v_p; classical = classical_length /
/// v_f + sum of delays.
TransitTimes transit_times(const NodeLink& link, const MediumProfile& medium);

}  // namespace qcsync
