#include "qcsync/planner.hpp"

namespace qcsync {

namespace {

void require_lead(LeadTarget target) {
  if (target.lead < Time{0}) {
    throw ValidationError("lead must be non-negative, got " + to_string(target.lead));
  }
}

TransitTimes require_synchronized(const NodeLink& link, const MediumProfile& medium) {
  TransitTimes t = transit_times(link, medium);
  if (t.quantum != t.classical) {
    throw NotSynchronized("link '" + link.node_id + "' is not synchronized: quantum arrives at " +
                          to_string(t.quantum) + ", classical at " + to_string(t.classical));
  }
  return t;
}

}  // namespace

std::string_view to_string(PlanModel model) {
  switch (model) {
    case PlanModel::ShortenClassical: return "shorten_classical";
    case PlanModel::LengthenPmf: return "lengthen_pmf";
    case PlanModel::ReplaceDelays: return "replace_delays";
  }
  throw ValidationError("unknown plan model");
}

PlanModel plan_model_from_string(std::string_view name) {
  for (PlanModel m : {PlanModel::ShortenClassical, PlanModel::LengthenPmf,
                      PlanModel::ReplaceDelays}) {
    if (to_string(m) == name) return m;
  }
  throw ParseError("unknown plan model '" + std::string(name) + "'");
}

SyncPlan plan_shorten_classical(const NodeLink& link, const MediumProfile& medium,
                                LeadTarget target) {
  require_lead(target);
  TransitTimes before = require_synchronized(link, medium);

  Velocity v_f = fiber_velocity(medium);
  Length new_classical = link.classical_length - v_f.travel(target.lead);
  if (target.lead > Time{0} && new_classical <= Length{0}) {
    throw LengthUnderflow("link '" + link.node_id + "': shortening by " +
                          to_string(target.lead) + " of fiber leaves " +
                          to_string(new_classical));
  }

  Time new_classical_time = v_f.time_over(new_classical) + total_delay(link.delays);
  return SyncPlan{
      .node_id = link.node_id,
      .model = PlanModel::ShortenClassical,
      .new_quantum_length = link.quantum_length,
      .new_classical_length = new_classical,
      .chosen_delays = std::nullopt,
      .predicted_gap = before.quantum - new_classical_time,
  };
}

SyncPlan plan_lengthen_pmf(const NodeLink& link, const MediumProfile& medium,
                           LeadTarget target) {
  require_lead(target);
  TransitTimes before = require_synchronized(link, medium);

  Velocity v_p = photon_velocity(medium);
  Length new_quantum = link.quantum_length + v_p.travel(target.lead);

  Time new_quantum_time = v_p.time_over(new_quantum);
  return SyncPlan{
      .node_id = link.node_id,
      .model = PlanModel::LengthenPmf,
      .new_quantum_length = new_quantum,
      .new_classical_length = link.classical_length,
      .chosen_delays = std::nullopt,
      .predicted_gap = new_quantum_time - before.classical,
  };
}

MultiNodePlan plan_multinode(std::span<const NodeLink> links, const MediumProfile& medium,
                             std::span<const LeadTarget> targets, PlanModel model) {
  if (links.size() != targets.size()) {
    throw ValidationError("plan_multinode: " + std::to_string(links.size()) + " links but " +
                          std::to_string(targets.size()) + " targets");
  }
  if (model == PlanModel::ReplaceDelays) {
    throw ValidationError("replace_delays needs a delay pool; plan it per node");
  }

  MultiNodePlan result;
  for (std::size_t i = 0; i < links.size(); ++i) {
    try {
      if (model == PlanModel::ShortenClassical) {
        result.plans.push_back(plan_shorten_classical(links[i], medium, targets[i]));
      } else {
        result.plans.push_back(plan_lengthen_pmf(links[i], medium, targets[i]));
      }
    } catch (const Error& e) {
      result.errors.push_back(PlanError{links[i].node_id, e.code(), e.what()});
    }
  }
  return result;
}

NodeLink apply_plan(const NodeLink& link, const SyncPlan& plan) {
  if (plan.node_id != link.node_id) {
    throw ValidationError("plan for node '" + plan.node_id + "' applied to link '" +
                          link.node_id + "'");
  }
  NodeLink out = link;
  out.quantum_length = plan.new_quantum_length;
  out.classical_length = plan.new_classical_length;
  if (plan.model == PlanModel::ReplaceDelays) {
    if (!plan.chosen_delays) {
      throw ValidationError("replace_delays plan for '" + plan.node_id +
                            "' carries no delay list");
    }
    out.delays = *plan.chosen_delays;
  }
  return out;
}

}  // namespace qcsync
