#include "qcsync/simulator.hpp"

#include <algorithm>

#include "int128_ops.hpp"
#include "qcsync/errors.hpp"
#include "qcsync/kinematics.hpp"

namespace qcsync {

std::string_view to_string(Verdict v) {
  return v == Verdict::Continue ? "continue" : "drop";
}

Verdict verdict_from_string(std::string_view name) {
  if (name == "continue") return Verdict::Continue;
  if (name == "drop") return Verdict::Drop;
  throw ParseError("unknown verdict '" + std::string(name) + "'");
}

std::vector<TransitEvent> simulate(std::span<const NodeLink> links, const MediumProfile& medium,
                                   const EmissionSchedule& schedule, const JitterMap& jitter) {
  std::unordered_map<std::string_view, TransitTimes> per_link;
  per_link.reserve(links.size());
  for (const NodeLink& link : links) {
    if (!per_link.emplace(link.node_id, transit_times(link, medium)).second) {
      throw ValidationError("node '" + link.node_id + "' has two links");
    }
  }

  std::vector<TransitEvent> events;
  events.reserve(schedule.emissions.size());
  for (const Emission& emission : schedule.emissions) {
    auto found = per_link.find(emission.node_id);
    if (found == per_link.end()) {
      throw UnknownNode("emission of packet '" + emission.packet_id +
                        "' names node '" + emission.node_id + "' which has no link");
    }
    Time t_qa = emission.emit_time + found->second.quantum;
    Time t_ca = emission.emit_time + found->second.classical;
    if (auto j = jitter.find(emission.packet_id); j != jitter.end()) {
      t_qa += j->second.quantum;
      t_ca += j->second.classical;
    }
    events.push_back(TransitEvent{
        .packet_id = emission.packet_id,
        .node_id = emission.node_id,
        .t_qa = t_qa,
        .t_ca = t_ca,
        .t_delta = t_ca - t_qa,
    });
  }

  std::sort(events.begin(), events.end(), [](const TransitEvent& a, const TransitEvent& b) {
    if (a.node_id != b.node_id) return a.node_id < b.node_id;
    return a.packet_id < b.packet_id;
  });
  return events;
}

GateDecision sync_gate(const TransitEvent& event, Time tolerance) {
  return GateDecision{
      .packet_id = event.packet_id,
      .verdict = event.t_delta <= tolerance ? Verdict::Continue : Verdict::Drop,
  };
}

SyncReport run_sync_loop(std::span<const TransitEvent> events, Time tolerance) {
  SyncReport report;
  report.decisions.reserve(events.size());
  detail::int128 delta_sum = 0;
  for (const TransitEvent& event : events) {
    GateDecision decision = sync_gate(event, tolerance);
    NodeCounts& counts = report.per_node[event.node_id];
    if (decision.verdict == Verdict::Continue) {
      ++report.continued;
      ++counts.continued;
    } else {
      ++report.dropped;
      ++counts.dropped;
    }
    delta_sum += event.t_delta.ps;
    if (!report.min_delta || event.t_delta < *report.min_delta) report.min_delta = event.t_delta;
    if (!report.max_delta || event.t_delta > *report.max_delta) report.max_delta = event.t_delta;
    report.decisions.push_back(std::move(decision));
  }
  if (!events.empty()) {
    report.mean_delta = Rational(detail::narrow128(delta_sum, "delta sum"),
                                 static_cast<std::int64_t>(events.size()));
  }
  return report;
}

}  // namespace qcsync
