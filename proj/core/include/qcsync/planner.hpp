#pragma once

#include "qcsync/errors.hpp"
#include "qcsync/kinematics.hpp"
#include "qcsync/link.hpp"
#include "qcsync/medium.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qcsync {

/// Desired lead of the classical signal over the quantum photon, as a
/// non-negative magnitude. Sign conventions are normalized away: callers
/// always pass how much earlier the classical side must arrive.
struct LeadTarget {
  Time lead;

  bool operator==(const LeadTarget&) const = default;
};

enum class PlanModel {
  ShortenClassical,
  LengthenPmf,
  ReplaceDelays,
};

std::string_view to_string(PlanModel model);
PlanModel plan_model_from_string(std::string_view name);

/// Output of any planner model. Both lengths are always populated; the
/// model tag says which aspect differs from the input link. predicted_gap
/// is t_quantum - t_classical after the plan is applied.
struct SyncPlan {
  std::string node_id;
  PlanModel model{PlanModel::ShortenClassical};
  Length new_quantum_length;
  Length new_classical_length;
  std::optional<std::vector<DelayElement>> chosen_delays;
  Time predicted_gap;

  bool operator==(const SyncPlan&) const = default;
};

/// Shorten the classical fiber by lead * v_f so the classical signal leads
/// by exactly the target. The link must start synchronized (equal transit
/// times); the shortened cable must stay strictly positive.
SyncPlan plan_shorten_classical(const NodeLink& link, const MediumProfile& medium,
                                LeadTarget target);

/// Lengthen the PMF by lead * v_p, leaving the classical side alone.
SyncPlan plan_lengthen_pmf(const NodeLink& link, const MediumProfile& medium,
                           LeadTarget target);

struct PlanError {
  std::string node_id;
  ErrorCode code{ErrorCode::ValidationError};
  std::string message;

  bool operator==(const PlanError&) const = default;
};

struct MultiNodePlan {
  std::vector<SyncPlan> plans;
  std::vector<PlanError> errors;
};

/// Plans every node independently with the chosen length model; a failing
/// node contributes an attributed error without disturbing the others.
/// links and targets are paired positionally and must have equal size.
MultiNodePlan plan_multinode(std::span<const NodeLink> links, const MediumProfile& medium,
                             std::span<const LeadTarget> targets, PlanModel model);

/// The link as it would be installed after the plan: exactly one aspect
/// (classical length, quantum length, or delay list) replaced.
NodeLink apply_plan(const NodeLink& link, const SyncPlan& plan);

}  // namespace qcsync
