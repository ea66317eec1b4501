#pragma once

#include "qcsync/link.hpp"
#include "qcsync/medium.hpp"
#include "qcsync/rational.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace qcsync {

struct Emission {
  Time emit_time;
  std::string node_id;
  std::string packet_id;

  bool operator==(const Emission&) const = default;
};

/// Emission times are non-decreasing and packet ids unique; scenario
/// loading enforces both.
struct EmissionSchedule {
  std::vector<Emission> emissions;

  bool operator==(const EmissionSchedule&) const = default;
};

/// Deterministic per-packet arrival offsets, one per channel. Not part of
/// the physical model; supplied explicitly to exercise the drop branch.
struct ChannelJitter {
  Time quantum;
  Time classical;

  bool operator==(const ChannelJitter&) const = default;
};

using JitterMap = std::unordered_map<std::string, ChannelJitter>;

/// Paired arrival record for one packet at one node.
/// t_delta = t_ca - t_qa; negative means the classical signal led.
struct TransitEvent {
  std::string packet_id;
  std::string node_id;
  Time t_qa;
  Time t_ca;
  Time t_delta;

  bool operator==(const TransitEvent&) const = default;
};

enum class Verdict { Continue, Drop };

std::string_view to_string(Verdict v);
Verdict verdict_from_string(std::string_view name);

struct GateDecision {
  std::string packet_id;
  Verdict verdict{Verdict::Continue};

  bool operator==(const GateDecision&) const = default;
};

/// Computes both arrival times for every scheduled emission. Fully
/// deterministic; events come back ordered by (node_id, packet_id).
/// Throws UnknownNode when an emission names a node with no link.
std::vector<TransitEvent> simulate(std::span<const NodeLink> links, const MediumProfile& medium,
                                   const EmissionSchedule& schedule,
                                   const JitterMap& jitter = {});

/// The synchronization gate: continue while the classical signal is not
/// late (t_delta <= tolerance), otherwise drop the photon. The default
/// tolerance of zero is the literal gate.
GateDecision sync_gate(const TransitEvent& event, Time tolerance = Time{0});

struct NodeCounts {
  std::int64_t continued{0};
  std::int64_t dropped{0};

  bool operator==(const NodeCounts&) const = default;
};

/// Aggregate of one gate run. mean_delta is exact (sum over count); min,
/// max and mean are empty for an empty event stream.
struct SyncReport {
  std::int64_t continued{0};
  std::int64_t dropped{0};
  std::map<std::string, NodeCounts> per_node;
  std::optional<Time> min_delta;
  std::optional<Time> max_delta;
  std::optional<Rational> mean_delta;
  std::vector<GateDecision> decisions;

  bool operator==(const SyncReport&) const = default;
};

/// Applies the gate to every event and aggregates verdicts per node.
/// Counts are independent of processing order.
SyncReport run_sync_loop(std::span<const TransitEvent> events, Time tolerance = Time{0});

}  // namespace qcsync
