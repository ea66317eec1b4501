#include "qcsync/report.hpp"

#include <limits>
#include <sstream>

#include "json.hpp"
#include "qcsync/errors.hpp"

namespace qcsync {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json delays_json(const std::vector<DelayElement>& delays) {
  ordered_json arr = ordered_json::array();
  for (const DelayElement& e : delays) {
    arr.push_back(ordered_json{{"id", e.id}, {"duration_ps", e.duration.ps}});
  }
  return arr;
}

[[noreturn]] void fail(const std::string& path, const std::string& rule) {
  throw ValidationError(path + ": " + rule);
}

std::int64_t take_int(const json& v, const std::string& path) {
  if (v.is_number_unsigned()) {
    auto u = v.get<std::uint64_t>();
    if (u > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
      fail(path, "integer out of signed 64-bit range");
    }
    return static_cast<std::int64_t>(u);
  }
  if (v.is_number_integer()) return v.get<std::int64_t>();
  fail(path, "expected an integer");
}

std::string take_string(const json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

std::vector<DelayElement> take_delays(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array");
  std::vector<DelayElement> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string at = path + "[" + std::to_string(i) + "]";
    out.push_back(DelayElement{take_string(v[i].at("id"), at + ".id"),
                               Time{take_int(v[i].at("duration_ps"), at + ".duration_ps")}});
  }
  return out;
}

RunReport parse_report_body(const json& doc);

}  // namespace

RunReport make_run_report(std::vector<SyncPlan> plans, std::vector<PlanError> plan_errors,
                          std::vector<DelaySlack> slacks, std::span<const TransitEvent> events,
                          const SyncReport& gate_report) {
  if (gate_report.decisions.size() != events.size()) {
    throw ValidationError("gate report covers " + std::to_string(gate_report.decisions.size()) +
                          " decisions for " + std::to_string(events.size()) + " events");
  }
  RunReport report;
  report.plans = std::move(plans);
  report.plan_errors = std::move(plan_errors);
  report.slacks = std::move(slacks);
  report.packets.reserve(events.size());
  for (std::size_t i = 0; i < events.size(); ++i) {
    report.packets.push_back(PacketRow{
        .packet_id = events[i].packet_id,
        .node_id = events[i].node_id,
        .t_qa = events[i].t_qa,
        .t_ca = events[i].t_ca,
        .t_delta = events[i].t_delta,
        .verdict = gate_report.decisions[i].verdict,
    });
  }
  report.continued = gate_report.continued;
  report.dropped = gate_report.dropped;
  report.per_node = gate_report.per_node;
  report.min_delta = gate_report.min_delta;
  report.max_delta = gate_report.max_delta;
  report.mean_delta = gate_report.mean_delta;
  return report;
}

std::string emit_report(const RunReport& report, ReportFormat format) {
  if (format == ReportFormat::Csv) {
    std::ostringstream out;
    out << "packet_id,node_id,t_qa_ps,t_ca_ps,t_delta_ps,verdict\n";
    for (const PacketRow& row : report.packets) {
      out << row.packet_id << ',' << row.node_id << ',' << row.t_qa.ps << ',' << row.t_ca.ps
          << ',' << row.t_delta.ps << ',' << to_string(row.verdict) << '\n';
    }
    return out.str();
  }

  ordered_json doc;
  doc["version"] = "1";

  ordered_json plans = ordered_json::array();
  for (const SyncPlan& plan : report.plans) {
    ordered_json p{{"node", plan.node_id},
                   {"model", std::string(to_string(plan.model))},
                   {"quantum_length_um", plan.new_quantum_length.um},
                   {"classical_length_um", plan.new_classical_length.um},
                   {"predicted_gap_ps", plan.predicted_gap.ps}};
    if (plan.chosen_delays) {
      p["chosen_delays"] = delays_json(*plan.chosen_delays);
    }
    plans.push_back(std::move(p));
  }
  doc["plans"] = std::move(plans);

  ordered_json plan_errors = ordered_json::array();
  for (const PlanError& e : report.plan_errors) {
    plan_errors.push_back(ordered_json{{"node", e.node_id},
                                       {"code", std::string(to_string(e.code))},
                                       {"message", e.message}});
  }
  doc["plan_errors"] = std::move(plan_errors);

  ordered_json slacks = ordered_json::array();
  for (const DelaySlack& s : report.slacks) {
    slacks.push_back(ordered_json{{"node", s.node_id},
                                  {"retained_total_ps", s.retained_total.ps},
                                  {"saving_ps", s.saving.ps},
                                  {"slack_ps", s.slack.ps}});
  }
  doc["slack"] = std::move(slacks);

  ordered_json packets = ordered_json::array();
  for (const PacketRow& row : report.packets) {
    packets.push_back(ordered_json{{"packet", row.packet_id},
                                   {"node", row.node_id},
                                   {"t_qa_ps", row.t_qa.ps},
                                   {"t_ca_ps", row.t_ca.ps},
                                   {"t_delta_ps", row.t_delta.ps},
                                   {"verdict", std::string(to_string(row.verdict))}});
  }
  doc["packets"] = std::move(packets);

  ordered_json per_node = ordered_json::object();
  for (const auto& [node, counts] : report.per_node) {
    per_node[node] = ordered_json{{"continued", counts.continued}, {"dropped", counts.dropped}};
  }
  ordered_json aggregates{{"continued", report.continued},
                          {"dropped", report.dropped},
                          {"per_node", std::move(per_node)}};
  aggregates["min_delta_ps"] = report.min_delta ? ordered_json(report.min_delta->ps) : nullptr;
  aggregates["max_delta_ps"] = report.max_delta ? ordered_json(report.max_delta->ps) : nullptr;
  aggregates["mean_delta"] =
      report.mean_delta
          ? ordered_json{{"num", report.mean_delta->num()}, {"den", report.mean_delta->den()}}
          : ordered_json(nullptr);
  doc["aggregates"] = std::move(aggregates);

  return doc.dump(2) + "\n";
}

RunReport parse_report(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error&) {
    throw ParseError("malformed report JSON");
  }
  if (!doc.is_object()) fail("$", "expected an object");
  try {
    return parse_report_body(doc);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("report document is incomplete: ") + e.what());
  }
}

namespace {

RunReport parse_report_body(const json& doc) {
  if (take_string(doc.at("version"), "$.version") != "1") fail("$.version", "expected \"1\"");

  RunReport report;
  const json& plans = doc.at("plans");
  for (std::size_t i = 0; i < plans.size(); ++i) {
    const std::string at = "$.plans[" + std::to_string(i) + "]";
    const json& p = plans[i];
    SyncPlan plan;
    plan.node_id = take_string(p.at("node"), at + ".node");
    plan.model = plan_model_from_string(take_string(p.at("model"), at + ".model"));
    plan.new_quantum_length = Length{take_int(p.at("quantum_length_um"), at)};
    plan.new_classical_length = Length{take_int(p.at("classical_length_um"), at)};
    plan.predicted_gap = Time{take_int(p.at("predicted_gap_ps"), at)};
    if (p.contains("chosen_delays")) {
      plan.chosen_delays = take_delays(p["chosen_delays"], at + ".chosen_delays");
    }
    report.plans.push_back(std::move(plan));
  }

  const json& plan_errors = doc.at("plan_errors");
  for (std::size_t i = 0; i < plan_errors.size(); ++i) {
    const std::string at = "$.plan_errors[" + std::to_string(i) + "]";
    report.plan_errors.push_back(
        PlanError{take_string(plan_errors[i].at("node"), at + ".node"),
                  error_code_from_string(take_string(plan_errors[i].at("code"), at + ".code")),
                  take_string(plan_errors[i].at("message"), at + ".message")});
  }

  const json& slacks = doc.at("slack");
  for (std::size_t i = 0; i < slacks.size(); ++i) {
    const std::string at = "$.slack[" + std::to_string(i) + "]";
    report.slacks.push_back(DelaySlack{take_string(slacks[i].at("node"), at + ".node"),
                                       Time{take_int(slacks[i].at("retained_total_ps"), at)},
                                       Time{take_int(slacks[i].at("saving_ps"), at)},
                                       Time{take_int(slacks[i].at("slack_ps"), at)}});
  }

  const json& packets = doc.at("packets");
  for (std::size_t i = 0; i < packets.size(); ++i) {
    const std::string at = "$.packets[" + std::to_string(i) + "]";
    const json& row = packets[i];
    report.packets.push_back(
        PacketRow{take_string(row.at("packet"), at + ".packet"),
                  take_string(row.at("node"), at + ".node"),
                  Time{take_int(row.at("t_qa_ps"), at)}, Time{take_int(row.at("t_ca_ps"), at)},
                  Time{take_int(row.at("t_delta_ps"), at)},
                  verdict_from_string(take_string(row.at("verdict"), at + ".verdict"))});
  }

  const json& aggregates = doc.at("aggregates");
  report.continued = take_int(aggregates.at("continued"), "$.aggregates.continued");
  report.dropped = take_int(aggregates.at("dropped"), "$.aggregates.dropped");
  for (const auto& [node, counts] : aggregates.at("per_node").items()) {
    report.per_node[node] =
        NodeCounts{take_int(counts.at("continued"), "$.aggregates.per_node"),
                   take_int(counts.at("dropped"), "$.aggregates.per_node")};
  }
  if (!aggregates.at("min_delta_ps").is_null()) {
    report.min_delta = Time{take_int(aggregates.at("min_delta_ps"), "$.aggregates.min_delta_ps")};
  }
  if (!aggregates.at("max_delta_ps").is_null()) {
    report.max_delta = Time{take_int(aggregates.at("max_delta_ps"), "$.aggregates.max_delta_ps")};
  }
  if (!aggregates.at("mean_delta").is_null()) {
    const json& mean = aggregates.at("mean_delta");
    report.mean_delta = Rational(take_int(mean.at("num"), "$.aggregates.mean_delta.num"),
                                 take_int(mean.at("den"), "$.aggregates.mean_delta.den"));
  }
  return report;
}

}  // namespace

}  // namespace qcsync
