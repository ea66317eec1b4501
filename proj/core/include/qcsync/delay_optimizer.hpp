#pragma once

#include "qcsync/link.hpp"
#include "qcsync/medium.hpp"
#include "qcsync/planner.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace qcsync {

/// The global set of delay elements a node may be routed through. Element
/// ids are unique; durations may repeat across distinct ids. Every pair of
/// delays is assumed reachable (complete graph), so any subset is a valid
/// route.
struct DelayPool {
  std::vector<DelayElement> elements;

  bool operator==(const DelayPool&) const = default;
};

/// A chosen replacement set of delays for one node. chosen is sorted by
/// (duration, id). saving = sum(original) - retained_total and
/// slack = saving - lead; feasible selections have slack >= 0, and the
/// solver returns the selection with minimal slack.
struct DelaySelection {
  std::string node_id;
  std::vector<DelayElement> chosen;
  Time retained_total;
  Time saving;
  Time slack;

  bool operator==(const DelaySelection&) const = default;
};

struct SelectOptions {
  /// Subset-sum table budget in cells (pool size x capacity). Above it the
  /// solver switches to meet-in-the-middle enumeration.
  std::int64_t dp_cell_ceiling = 1'000'000'000;
  /// Largest pool meet-in-the-middle will take on before giving up with
  /// CapacityExceeded.
  std::size_t mitm_max_pool = 40;
};

/// Picks a pairwise-distinct subset of the pool, at least one element, that
/// maximizes the retained delay total subject to
///   retained_total <= sum(original) - target.lead,
/// i.e. minimizes the over-saving slack. Ties break by fewest elements,
/// then lexicographically smallest sorted duration list, then smallest
/// sorted id list. Throws Infeasible when even the smallest pool delay
/// overshoots the budget.
DelaySelection select_delays(std::span<const DelayElement> original, const DelayPool& pool,
                             LeadTarget target, const SelectOptions& options = {});

/// Same contract as select_delays, computed by exhaustive enumeration of
/// all nonempty subsets. Independent oracle; guarded to pools of at most
/// 20 elements (PoolTooLarge above that).
DelaySelection brute_force_select(std::span<const DelayElement> original, const DelayPool& pool,
                                  LeadTarget target);

struct AppliedSelection {
  Time new_t_classical;
  Time predicted_gap;

  bool operator==(const AppliedSelection&) const = default;
};

/// Classical arrival time after routing through the selection, with the
/// fiber length untouched, and the resulting quantum-minus-classical gap.
AppliedSelection apply_selection(const NodeLink& link, const DelaySelection& selection,
                                 const MediumProfile& medium);

struct ReplaceDelaysPlan {
  SyncPlan plan;
  DelaySelection selection;
};

/// select_delays + apply_selection for one link, packaged as a SyncPlan.
ReplaceDelaysPlan plan_replace_delays(const NodeLink& link, const DelayPool& pool,
                                      const MediumProfile& medium, LeadTarget target,
                                      const SelectOptions& options = {});

}  // namespace qcsync
