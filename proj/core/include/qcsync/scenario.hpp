#pragma once

#include "qcsync/delay_optimizer.hpp"
#include "qcsync/link.hpp"
#include "qcsync/medium.hpp"
#include "qcsync/planner.hpp"
#include "qcsync/simulator.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qcsync {

struct NodeTarget {
  std::string node_id;
  LeadTarget target;

  bool operator==(const NodeTarget&) const = default;
};

/// One fully validated input document: the medium, the per-node links,
/// planning targets, an optional explicit delay pool, the emission
/// schedule, optional per-packet jitter and the gate tolerance.
struct Scenario {
  MediumProfile medium;
  std::vector<NodeLink> links;
  std::vector<NodeTarget> targets;
  std::optional<DelayPool> pool;
  EmissionSchedule schedule;
  JitterMap jitter;
  Time gate_tolerance;

  bool operator==(const Scenario&) const = default;
};

/// Parses and validates a scenario document (JSON, strict schema, explicit
/// units). Malformed text raises ParseError with line/column; an invariant
/// violation raises ValidationError naming the JSON path, the offending
/// node or packet id and the violated rule. Unknown keys are rejected.
Scenario parse_scenario(std::string_view text);

/// Reads the file and parses it. Unreadable files raise IoError.
Scenario load_scenario(const std::string& path);

/// Canonical serialization: times in ps, lengths in um, n_p as an exact
/// num/den pair. parse_scenario(emit_scenario(s)) == s.
std::string emit_scenario(const Scenario& scenario);

/// The delay pool a planner should draw from: the explicit pool when the
/// scenario has one, otherwise the union of every link's delay elements.
DelayPool effective_pool(const Scenario& scenario);

}  // namespace qcsync
