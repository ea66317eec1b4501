#pragma once

#include "qcsync/planner.hpp"
#include "qcsync/simulator.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qcsync {

struct PacketRow {
  std::string packet_id;
  std::string node_id;
  Time t_qa;
  Time t_ca;
  Time t_delta;
  Verdict verdict{Verdict::Continue};

  bool operator==(const PacketRow&) const = default;
};

/// Over-saving bookkeeping for one node's delay selection.
struct DelaySlack {
  std::string node_id;
  Time retained_total;
  Time saving;
  Time slack;

  bool operator==(const DelaySlack&) const = default;
};

/// The emitted result document: plan echo per node, per-packet gate
/// decisions, aggregate counts and delay-selection slack statistics.
struct RunReport {
  std::vector<SyncPlan> plans;
  std::vector<PlanError> plan_errors;
  std::vector<DelaySlack> slacks;
  std::vector<PacketRow> packets;
  std::int64_t continued{0};
  std::int64_t dropped{0};
  std::map<std::string, NodeCounts> per_node;
  std::optional<Time> min_delta;
  std::optional<Time> max_delta;
  std::optional<Rational> mean_delta;

  bool operator==(const RunReport&) const = default;
};

enum class ReportFormat { Json, Csv };

/// Packet rows paired with their gate verdicts, plus the aggregates.
RunReport make_run_report(std::vector<SyncPlan> plans, std::vector<PlanError> plan_errors,
                          std::vector<DelaySlack> slacks, std::span<const TransitEvent> events,
                          const SyncReport& gate_report);

/// Deterministic serialization. JSON carries the full document; CSV is the
/// per-packet table with fixed columns
/// packet_id,node_id,t_qa_ps,t_ca_ps,t_delta_ps,verdict.
std::string emit_report(const RunReport& report, ReportFormat format);

/// Inverse of the JSON form: parse_report(emit_report(r, Json)) == r.
RunReport parse_report(std::string_view json_text);

}  // namespace qcsync
