#pragma once

#include "qcsync/units.hpp"

#include <span>
#include <string>
#include <vector>

namespace qcsync {

/// One multihop stage on the classical path: propagation, processing,
/// transmission or queueing, of fixed positive duration.
struct DelayElement {
  std::string id;
  Time duration;

  bool operator==(const DelayElement&) const = default;
};

/// Channels from the sender to one destination node: a direct PMF for the
/// quantum channel and a fiber run plus serial delays for the classical one.
struct NodeLink {
  std::string node_id;
  Length quantum_length;
  Length classical_length;
  std::vector<DelayElement> delays;

  bool operator==(const NodeLink&) const = default;
};

/// Sum of all delay durations, overflow-checked.
Time total_delay(std::span<const DelayElement> delays);

}  // namespace qcsync
