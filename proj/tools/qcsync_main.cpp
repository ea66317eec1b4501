#include <fstream>
#include <iostream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qcsync/delay_optimizer.hpp"
#include "qcsync/errors.hpp"
#include "qcsync/planner.hpp"
#include "qcsync/report.hpp"
#include "qcsync/scenario.hpp"
#include "qcsync/simulator.hpp"

namespace {

// 2: rejected input (parse, validation, usage); 3: no plan exists within the
// stated limits; 4: filesystem trouble. Verify mismatches use 1 directly.
int exit_class(qcsync::ErrorCode code) {
  switch (code) {
    case qcsync::ErrorCode::Infeasible:
    case qcsync::ErrorCode::LengthUnderflow:
    case qcsync::ErrorCode::CapacityExceeded:
      return 3;
    case qcsync::ErrorCode::IoError:
      return 4;
    default:
      return 2;
  }
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    throw qcsync::IoError("cannot write '" + out_path + "'");
  }
  out << text;
  out.flush();
  if (!out) {
    throw qcsync::IoError("cannot write '" + out_path + "'");
  }
}

const qcsync::NodeLink& link_for(const qcsync::Scenario& scenario, const std::string& node_id) {
  for (const qcsync::NodeLink& link : scenario.links) {
    if (link.node_id == node_id) return link;
  }
  throw qcsync::UnknownNode("no link for node '" + node_id + "'");
}

std::vector<qcsync::NodeTarget> selected_targets(const qcsync::Scenario& scenario,
                                                 const std::vector<std::string>& nodes) {
  if (nodes.empty()) return scenario.targets;
  std::vector<qcsync::NodeTarget> out;
  for (const std::string& node : nodes) {
    bool found = false;
    for (const qcsync::NodeTarget& target : scenario.targets) {
      if (target.node_id == node) {
        out.push_back(target);
        found = true;
        break;
      }
    }
    if (!found) {
      throw qcsync::UnknownNode("--node '" + node + "' has no planning target in the scenario");
    }
  }
  return out;
}

int plan_exit(const std::vector<qcsync::PlanError>& errors) {
  bool infeasible = false;
  for (const qcsync::PlanError& e : errors) {
    int cls = exit_class(e.code);
    if (cls == 2) return 2;
    if (cls == 3) infeasible = true;
  }
  return infeasible ? 3 : 0;
}

int run_plan(const std::string& scenario_path, const std::string& out_path,
             const std::vector<std::string>& nodes, qcsync::PlanModel model) {
  qcsync::Scenario scenario = qcsync::load_scenario(scenario_path);
  std::vector<qcsync::NodeTarget> targets = selected_targets(scenario, nodes);
  qcsync::DelayPool pool;
  if (model == qcsync::PlanModel::ReplaceDelays) {
    pool = qcsync::effective_pool(scenario);
  }

  qcsync::RunReport report;
  for (const qcsync::NodeTarget& target : targets) {
    const qcsync::NodeLink& link = link_for(scenario, target.node_id);
    try {
      switch (model) {
        case qcsync::PlanModel::ShortenClassical:
          report.plans.push_back(
              qcsync::plan_shorten_classical(link, scenario.medium, target.target));
          break;
        case qcsync::PlanModel::LengthenPmf:
          report.plans.push_back(qcsync::plan_lengthen_pmf(link, scenario.medium, target.target));
          break;
        case qcsync::PlanModel::ReplaceDelays: {
          qcsync::ReplaceDelaysPlan planned =
              qcsync::plan_replace_delays(link, pool, scenario.medium, target.target);
          report.plans.push_back(std::move(planned.plan));
          report.slacks.push_back(qcsync::DelaySlack{
              target.node_id,
              planned.selection.retained_total,
              planned.selection.saving,
              planned.selection.slack,
          });
          break;
        }
      }
    } catch (const qcsync::Error& e) {
      report.plan_errors.push_back(qcsync::PlanError{target.node_id, e.code(), e.what()});
    }
  }

  write_output(qcsync::emit_report(report, qcsync::ReportFormat::Json), out_path);
  return plan_exit(report.plan_errors);
}

int run_simulate(const std::string& scenario_path, const std::string& out_path,
                 const std::string& format, std::optional<std::int64_t> tolerance_ps) {
  qcsync::Scenario scenario = qcsync::load_scenario(scenario_path);
  std::vector<qcsync::TransitEvent> events =
      qcsync::simulate(scenario.links, scenario.medium, scenario.schedule, scenario.jitter);
  qcsync::Time tolerance =
      tolerance_ps ? qcsync::Time{*tolerance_ps} : scenario.gate_tolerance;
  qcsync::SyncReport gate = qcsync::run_sync_loop(events, tolerance);
  qcsync::RunReport report = qcsync::make_run_report({}, {}, {}, events, gate);
  qcsync::ReportFormat out_format =
      format == "csv" ? qcsync::ReportFormat::Csv : qcsync::ReportFormat::Json;
  write_output(qcsync::emit_report(report, out_format), out_path);
  return 0;
}

struct CheckRow {
  std::string node;
  std::string model;
  std::string status;  // ok | mismatch | skipped
  std::optional<std::int64_t> predicted_gap_ps;
  std::optional<std::int64_t> achieved_delta_ps;
  std::string reason;
};

std::string csv_quote(const std::string& raw) {
  if (raw.find_first_of(",\"\n") == std::string::npos) return raw;
  std::string quoted = "\"";
  for (char c : raw) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

std::string emit_checks(const std::vector<CheckRow>& rows, const std::string& format) {
  if (format == "csv") {
    std::string out = "node,model,status,predicted_gap_ps,achieved_delta_ps,reason\n";
    for (const CheckRow& row : rows) {
      out += row.node + ',' + row.model + ',' + row.status + ',';
      out += (row.predicted_gap_ps ? std::to_string(*row.predicted_gap_ps) : "") + ",";
      out += (row.achieved_delta_ps ? std::to_string(*row.achieved_delta_ps) : "") + ",";
      out += csv_quote(row.reason) + "\n";
    }
    return out;
  }
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const CheckRow& row : rows) {
    nlohmann::ordered_json entry{
        {"node", row.node}, {"model", row.model}, {"status", row.status}};
    if (row.predicted_gap_ps) entry["predicted_gap_ps"] = *row.predicted_gap_ps;
    if (row.achieved_delta_ps) entry["achieved_delta_ps"] = *row.achieved_delta_ps;
    if (!row.reason.empty()) entry["reason"] = row.reason;
    checks.push_back(std::move(entry));
  }
  nlohmann::ordered_json doc{{"version", "1"}, {"checks", std::move(checks)}};
  return doc.dump(2) + "\n";
}

int run_verify(const std::string& scenario_path, const std::string& out_path,
               const std::string& format, const std::vector<std::string>& nodes,
               const std::string& model_name) {
  qcsync::Scenario scenario = qcsync::load_scenario(scenario_path);
  std::vector<qcsync::NodeTarget> targets = selected_targets(scenario, nodes);
  qcsync::DelayPool pool = qcsync::effective_pool(scenario);

  std::vector<qcsync::PlanModel> models;
  if (model_name == "linear") {
    models = {qcsync::PlanModel::ShortenClassical};
  } else if (model_name == "pmf") {
    models = {qcsync::PlanModel::LengthenPmf};
  } else if (model_name == "delays") {
    models = {qcsync::PlanModel::ReplaceDelays};
  } else {
    models = {qcsync::PlanModel::ShortenClassical, qcsync::PlanModel::LengthenPmf};
    if (!pool.elements.empty()) models.push_back(qcsync::PlanModel::ReplaceDelays);
  }

  std::vector<CheckRow> rows;
  bool mismatch = false;
  for (qcsync::PlanModel model : models) {
    for (const qcsync::NodeTarget& target : targets) {
      const qcsync::NodeLink& link = link_for(scenario, target.node_id);
      const std::string model_label{qcsync::to_string(model)};
      qcsync::SyncPlan plan;
      try {
        switch (model) {
          case qcsync::PlanModel::ShortenClassical:
            plan = qcsync::plan_shorten_classical(link, scenario.medium, target.target);
            break;
          case qcsync::PlanModel::LengthenPmf:
            plan = qcsync::plan_lengthen_pmf(link, scenario.medium, target.target);
            break;
          case qcsync::PlanModel::ReplaceDelays:
            plan = qcsync::plan_replace_delays(link, pool, scenario.medium, target.target).plan;
            break;
        }
      } catch (const qcsync::Error& e) {
        rows.push_back(CheckRow{target.node_id, model_label, "skipped", {}, {}, e.what()});
        continue;
      }

      qcsync::NodeLink applied = qcsync::apply_plan(link, plan);
      qcsync::EmissionSchedule schedule;
      if (scenario.schedule.emissions.empty()) {
        schedule.emissions.push_back(
            qcsync::Emission{qcsync::Time{0}, target.node_id, "verify-0"});
      } else {
        for (const qcsync::Emission& emission : scenario.schedule.emissions) {
          if (emission.node_id == target.node_id) schedule.emissions.push_back(emission);
        }
      }
      if (schedule.emissions.empty()) {
        rows.push_back(CheckRow{target.node_id, model_label, "skipped", {}, {},
                                "no scheduled emission for this node"});
        continue;
      }

      // Jitter is deliberately ignored: the check pins the deterministic
      // geometry, achieved t_delta == -predicted_gap, for every model.
      std::vector<qcsync::TransitEvent> events =
          qcsync::simulate(std::span(&applied, 1), scenario.medium, schedule, {});
      for (const qcsync::TransitEvent& event : events) {
        bool ok = event.t_delta == -plan.predicted_gap;
        mismatch = mismatch || !ok;
        rows.push_back(CheckRow{target.node_id, model_label, ok ? "ok" : "mismatch",
                                plan.predicted_gap.ps, event.t_delta.ps, ""});
      }
    }
  }

  write_output(emit_checks(rows, format), out_path);
  return mismatch ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"planner and simulator for keeping a direct quantum channel and a"
               " multihop classical channel synchronized"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_path;
  std::string format = "json";
  std::vector<std::string> nodes;
  std::string model_name;
  std::optional<std::int64_t> tolerance_ps;

  CLI::App* plan = app.add_subcommand("plan", "compute per-node synchronization plans");
  plan->require_subcommand(1);
  CLI::App* plan_linear =
      plan->add_subcommand("linear", "shorten the classical fiber to create the lead");
  CLI::App* plan_pmf =
      plan->add_subcommand("pmf", "lengthen the quantum fiber to create the lead");
  CLI::App* plan_delays =
      plan->add_subcommand("delays", "re-route the classical path through pool delays");
  for (CLI::App* sub : {plan_linear, plan_pmf, plan_delays}) {
    sub->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    sub->add_option("--out", out_path, "write the report here instead of stdout");
    sub->add_option("--node", nodes, "plan only these target nodes (repeatable)");
  }

  CLI::App* simulate_cmd =
      app.add_subcommand("simulate", "run the schedule and apply the drop/continue gate");
  simulate_cmd->add_option("--scenario", scenario_path, "scenario JSON file")->required();
  simulate_cmd->add_option("--out", out_path, "write the report here instead of stdout");
  simulate_cmd->add_option("--format", format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));
  simulate_cmd->add_option("--tolerance-ps", tolerance_ps,
                           "gate tolerance in ps (overrides the scenario)");

  CLI::App* verify_cmd = app.add_subcommand(
      "verify", "check that planned links reproduce the predicted gap when simulated");
  verify_cmd->add_option("--scenario", scenario_path, "scenario JSON file")->required();
  verify_cmd->add_option("--out", out_path, "write the check table here instead of stdout");
  verify_cmd->add_option("--format", format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));
  verify_cmd->add_option("--node", nodes, "verify only these target nodes (repeatable)");
  verify_cmd->add_option("--model", model_name, "verify a single model")
      ->check(CLI::IsMember({"linear", "pmf", "delays"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (plan_linear->parsed()) {
      return run_plan(scenario_path, out_path, nodes, qcsync::PlanModel::ShortenClassical);
    }
    if (plan_pmf->parsed()) {
      return run_plan(scenario_path, out_path, nodes, qcsync::PlanModel::LengthenPmf);
    }
    if (plan_delays->parsed()) {
      return run_plan(scenario_path, out_path, nodes, qcsync::PlanModel::ReplaceDelays);
    }
    if (simulate_cmd->parsed()) {
      return run_simulate(scenario_path, out_path, format, tolerance_ps);
    }
    return run_verify(scenario_path, out_path, format, nodes, model_name);
  } catch (const qcsync::Error& e) {
    std::cerr << "error [" << qcsync::to_string(e.code()) << "]: " << e.what() << '\n';
    return exit_class(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
