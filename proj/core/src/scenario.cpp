#include "qcsync/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "qcsync/errors.hpp"

namespace qcsync {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr std::int64_t kMaxDenominator = 1'000'000'000;

[[noreturn]] void fail(const std::string& path, const std::string& rule) {
  throw ValidationError(path + ": " + rule);
}

bool valid_id(std::string_view s) {
  if (s.empty() || s.size() > 64) return false;
  for (char c : s) {
    bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
              c == '.' || c == '_' || c == '-';
    if (!ok) return false;
  }
  return true;
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> required,
                std::initializer_list<const char*> optional) {
  if (!obj.is_object()) fail(path, "expected an object");
  for (const char* key : required) {
    if (!obj.contains(key)) fail(path, std::string("missing required key '") + key + "'");
  }
  for (const auto& item : obj.items()) {
    auto known = [&](std::initializer_list<const char*> keys) {
      return std::any_of(keys.begin(), keys.end(),
                         [&](const char* k) { return item.key() == k; });
    };
    if (!known(required) && !known(optional)) {
      fail(path, "unknown key '" + item.key() + "'");
    }
  }
}

const json& member(const json& obj, const char* key) { return obj.at(key); }

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

std::string take_id(const json& v, const std::string& path) {
  std::string s = take_string(v, path);
  if (!valid_id(s)) fail(path, "id must match [A-Za-z0-9._-]{1,64}, got '" + s + "'");
  return s;
}

Time take_time(const json& v, const std::string& path) {
  check_keys(v, path, {"value", "unit"}, {});
  std::int64_t value = take_int(member(v, "value"), path + ".value");
  std::string unit = take_string(member(v, "unit"), path + ".unit");
  try {
    if (unit == "ps") return Time{value};
    if (unit == "ns") return Time::from_ns(value);
    if (unit == "us") return Time::from_us(value);
  } catch (const OverflowError&) {
    fail(path + ".value", "overflows the signed 64-bit picosecond range");
  }
  fail(path + ".unit", "expected one of ps, ns, us");
}

Length take_length(const json& v, const std::string& path) {
  check_keys(v, path, {"value", "unit"}, {});
  std::int64_t value = take_int(member(v, "value"), path + ".value");
  std::string unit = take_string(member(v, "unit"), path + ".unit");
  try {
    if (unit == "um") return Length{value};
    if (unit == "mm") return Length::from_mm(value);
    if (unit == "m") return Length::from_m(value);
  } catch (const OverflowError&) {
    fail(path + ".value", "overflows the signed 64-bit micrometer range");
  }
  fail(path + ".unit", "expected one of um, mm, m");
}

Rational take_rational(const json& v, const std::string& path) {
  if (v.is_object()) {
    check_keys(v, path, {"num", "den"}, {});
    std::int64_t num = take_int(member(v, "num"), path + ".num");
    std::int64_t den = take_int(member(v, "den"), path + ".den");
    if (den == 0) fail(path + ".den", "denominator must be nonzero");
    return Rational(num, den);
  }
  if (v.is_number_unsigned() || v.is_number_integer()) {
    return Rational::from_int(take_int(v, path));
  }
  if (v.is_number_float()) {
    return Rational::from_double_decimal(v.get<double>());
  }
  fail(path, "expected a number or a num/den object");
}

std::vector<DelayElement> take_delays(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array");
  std::vector<DelayElement> out;
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string at = path + "[" + std::to_string(i) + "]";
    check_keys(v[i], at, {"id", "duration"}, {});
    DelayElement e;
    e.id = take_id(member(v[i], "id"), at + ".id");
    e.duration = take_time(member(v[i], "duration"), at + ".duration");
    if (e.duration <= Time{0}) {
      fail(at + ".duration", "delay '" + e.id + "' must have positive duration");
    }
    if (!seen.insert(e.id).second) {
      fail(at + ".id", "delay id '" + e.id + "' appears twice");
    }
    out.push_back(std::move(e));
  }
  return out;
}

MediumProfile take_medium(const json& v, const std::string& path) {
  check_keys(v, path, {"n_p"}, {"c_vacuum_mps"});
  MediumProfile medium;
  if (v.contains("c_vacuum_mps")) {
    medium.c_vacuum_mps = take_rational(member(v, "c_vacuum_mps"), path + ".c_vacuum_mps");
    if (!medium.c_vacuum_mps.is_positive()) {
      fail(path + ".c_vacuum_mps", "vacuum light speed must be positive");
    }
    if (medium.c_vacuum_mps.den() > kMaxDenominator) {
      fail(path + ".c_vacuum_mps", "denominator must not exceed 1000000000");
    }
  }
  medium.n_p = take_rational(member(v, "n_p"), path + ".n_p");
  if (medium.n_p.den() > kMaxDenominator) {
    fail(path + ".n_p", "denominator must not exceed 1000000000");
  }
  if (!(Rational(1, 1) < medium.n_p && medium.n_p < Rational(3, 2))) {
    throw RefractionOutOfRange(path + ".n_p: refraction index must satisfy 1 < n_p < 3/2, got " +
                               medium.n_p.str());
  }
  return medium;
}

ordered_json time_json(Time t) { return ordered_json{{"value", t.ps}, {"unit", "ps"}}; }
ordered_json length_json(Length l) { return ordered_json{{"value", l.um}, {"unit", "um"}}; }

ordered_json rational_json(const Rational& r) {
  if (r.den() == 1) return ordered_json(r.num());
  return ordered_json{{"num", r.num()}, {"den", r.den()}};
}

ordered_json delays_json(const std::vector<DelayElement>& delays) {
  ordered_json arr = ordered_json::array();
  for (const DelayElement& e : delays) {
    arr.push_back(ordered_json{{"id", e.id}, {"duration", time_json(e.duration)}});
  }
  return arr;
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t last_newline = 0;
    const std::size_t stop = std::min(text.size(), e.byte == 0 ? std::size_t{0} : e.byte - 1);
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        last_newline = i + 1;
      }
    }
    throw ParseError("malformed JSON at line " + std::to_string(line) + ", column " +
                     std::to_string(stop - last_newline + 1));
  }

  check_keys(doc, "$", {"version", "medium", "links"},
             {"targets", "pool", "schedule", "jitter", "gate_tolerance"});

  if (take_string(member(doc, "version"), "$.version") != "1") {
    fail("$.version", "expected \"1\"");
  }

  Scenario scenario;
  scenario.medium = take_medium(member(doc, "medium"), "$.medium");

  const json& links = member(doc, "links");
  if (!links.is_array()) fail("$.links", "expected an array");
  std::unordered_set<std::string> node_ids;
  std::unordered_map<std::string, Time> delay_durations;
  for (std::size_t i = 0; i < links.size(); ++i) {
    const std::string at = "$.links[" + std::to_string(i) + "]";
    check_keys(links[i], at, {"node", "quantum_length", "classical_length"}, {"delays"});
    NodeLink link;
    link.node_id = take_id(member(links[i], "node"), at + ".node");
    if (!node_ids.insert(link.node_id).second) {
      fail(at + ".node", "node '" + link.node_id + "' has two links");
    }
    link.quantum_length = take_length(member(links[i], "quantum_length"), at + ".quantum_length");
    if (link.quantum_length <= Length{0}) {
      fail(at + ".quantum_length", "node '" + link.node_id + "': length must be positive");
    }
    link.classical_length =
        take_length(member(links[i], "classical_length"), at + ".classical_length");
    if (link.classical_length <= Length{0}) {
      fail(at + ".classical_length", "node '" + link.node_id + "': length must be positive");
    }
    if (links[i].contains("delays")) {
      link.delays = take_delays(links[i]["delays"], at + ".delays");
    }
    for (std::size_t j = 0; j < link.delays.size(); ++j) {
      const DelayElement& e = link.delays[j];
      auto [it, inserted] = delay_durations.emplace(e.id, e.duration);
      if (!inserted && it->second != e.duration) {
        fail(at + ".delays[" + std::to_string(j) + "]",
             "delay id '" + e.id + "' reuses an id with a different duration");
      }
    }
    scenario.links.push_back(std::move(link));
  }

  if (doc.contains("targets")) {
    const json& targets = doc["targets"];
    if (!targets.is_array()) fail("$.targets", "expected an array");
    std::unordered_set<std::string> target_nodes;
    for (std::size_t i = 0; i < targets.size(); ++i) {
      const std::string at = "$.targets[" + std::to_string(i) + "]";
      check_keys(targets[i], at, {"node", "lead"}, {});
      NodeTarget target;
      target.node_id = take_id(member(targets[i], "node"), at + ".node");
      if (!node_ids.contains(target.node_id)) {
        throw UnknownNode(at + ".node: target references unknown node '" + target.node_id + "'");
      }
      if (!target_nodes.insert(target.node_id).second) {
        fail(at + ".node", "node '" + target.node_id + "' has two targets");
      }
      target.target.lead = take_time(member(targets[i], "lead"), at + ".lead");
      if (target.target.lead < Time{0}) {
        fail(at + ".lead", "node '" + target.node_id + "': lead must be non-negative");
      }
      scenario.targets.push_back(std::move(target));
    }
  }

  if (doc.contains("pool")) {
    scenario.pool = DelayPool{take_delays(doc["pool"], "$.pool")};
  }

  if (doc.contains("schedule")) {
    const json& schedule = doc["schedule"];
    if (!schedule.is_array()) fail("$.schedule", "expected an array");
    std::unordered_set<std::string> packet_ids;
    for (std::size_t i = 0; i < schedule.size(); ++i) {
      const std::string at = "$.schedule[" + std::to_string(i) + "]";
      check_keys(schedule[i], at, {"packet", "node", "emit"}, {});
      Emission emission;
      emission.packet_id = take_id(member(schedule[i], "packet"), at + ".packet");
      if (!packet_ids.insert(emission.packet_id).second) {
        fail(at + ".packet", "packet '" + emission.packet_id + "' is emitted twice");
      }
      emission.node_id = take_id(member(schedule[i], "node"), at + ".node");
      if (!node_ids.contains(emission.node_id)) {
        throw UnknownNode(at + ".node: emission of packet '" + emission.packet_id +
                          "' references unknown node '" + emission.node_id + "'");
      }
      emission.emit_time = take_time(member(schedule[i], "emit"), at + ".emit");
      if (emission.emit_time < Time{0}) {
        fail(at + ".emit", "packet '" + emission.packet_id + "': emit time must be non-negative");
      }
      if (!scenario.schedule.emissions.empty() &&
          emission.emit_time < scenario.schedule.emissions.back().emit_time) {
        fail(at + ".emit",
             "packet '" + emission.packet_id + "': emission times must be non-decreasing");
      }
      scenario.schedule.emissions.push_back(std::move(emission));
    }
  }

  if (doc.contains("jitter")) {
    const json& jitter = doc["jitter"];
    if (!jitter.is_array()) fail("$.jitter", "expected an array");
    for (std::size_t i = 0; i < jitter.size(); ++i) {
      const std::string at = "$.jitter[" + std::to_string(i) + "]";
      check_keys(jitter[i], at, {"packet", "quantum", "classical"}, {});
      std::string packet = take_id(member(jitter[i], "packet"), at + ".packet");
      auto scheduled = std::any_of(
          scenario.schedule.emissions.begin(), scenario.schedule.emissions.end(),
          [&](const Emission& e) { return e.packet_id == packet; });
      if (!scheduled) {
        fail(at + ".packet", "jitter references unscheduled packet '" + packet + "'");
      }
      if (scenario.jitter.contains(packet)) {
        fail(at + ".packet", "packet '" + packet + "' has two jitter entries");
      }
      ChannelJitter cj;
      cj.quantum = take_time(member(jitter[i], "quantum"), at + ".quantum");
      cj.classical = take_time(member(jitter[i], "classical"), at + ".classical");
      scenario.jitter.emplace(std::move(packet), cj);
    }
  }

  if (doc.contains("gate_tolerance")) {
    scenario.gate_tolerance = take_time(doc["gate_tolerance"], "$.gate_tolerance");
    if (scenario.gate_tolerance < Time{0}) {
      fail("$.gate_tolerance", "tolerance must be non-negative");
    }
  }

  return scenario;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot read '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) {
    throw IoError("cannot read '" + path + "'");
  }
  return parse_scenario(buffer.str());
}

std::string emit_scenario(const Scenario& scenario) {
  ordered_json doc;
  doc["version"] = "1";
  doc["medium"] = ordered_json{{"c_vacuum_mps", rational_json(scenario.medium.c_vacuum_mps)},
                               {"n_p",
                                ordered_json{{"num", scenario.medium.n_p.num()},
                                             {"den", scenario.medium.n_p.den()}}}};

  ordered_json links = ordered_json::array();
  for (const NodeLink& link : scenario.links) {
    links.push_back(ordered_json{{"node", link.node_id},
                                 {"quantum_length", length_json(link.quantum_length)},
                                 {"classical_length", length_json(link.classical_length)},
                                 {"delays", delays_json(link.delays)}});
  }
  doc["links"] = std::move(links);

  ordered_json targets = ordered_json::array();
  for (const NodeTarget& target : scenario.targets) {
    targets.push_back(
        ordered_json{{"node", target.node_id}, {"lead", time_json(target.target.lead)}});
  }
  doc["targets"] = std::move(targets);

  if (scenario.pool) {
    doc["pool"] = delays_json(scenario.pool->elements);
  }

  ordered_json schedule = ordered_json::array();
  for (const Emission& emission : scenario.schedule.emissions) {
    schedule.push_back(ordered_json{{"packet", emission.packet_id},
                                    {"node", emission.node_id},
                                    {"emit", time_json(emission.emit_time)}});
  }
  doc["schedule"] = std::move(schedule);

  if (!scenario.jitter.empty()) {
    std::vector<std::string> packets;
    packets.reserve(scenario.jitter.size());
    for (const auto& [packet, unused] : scenario.jitter) packets.push_back(packet);
    std::sort(packets.begin(), packets.end());
    ordered_json jitter = ordered_json::array();
    for (const std::string& packet : packets) {
      const ChannelJitter& cj = scenario.jitter.at(packet);
      jitter.push_back(ordered_json{{"packet", packet},
                                    {"quantum", time_json(cj.quantum)},
                                    {"classical", time_json(cj.classical)}});
    }
    doc["jitter"] = std::move(jitter);
  }

  doc["gate_tolerance"] = time_json(scenario.gate_tolerance);
  return doc.dump(2) + "\n";
}

DelayPool effective_pool(const Scenario& scenario) {
  if (scenario.pool) return *scenario.pool;
  DelayPool pool;
  std::unordered_set<std::string> seen;
  for (const NodeLink& link : scenario.links) {
    for (const DelayElement& e : link.delays) {
      if (seen.insert(e.id).second) {
        pool.elements.push_back(e);
      }
    }
  }
  return pool;
}

}  // namespace qcsync
