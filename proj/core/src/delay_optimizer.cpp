#include "qcsync/delay_optimizer.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <cstring>
#include <map>
#include <numeric>
#include <optional>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "qcsync/errors.hpp"

namespace qcsync {

namespace {

void require_lead(LeadTarget target) {
  if (target.lead < Time{0}) {
    throw ValidationError("lead must be non-negative, got " + to_string(target.lead));
  }
}

void validate_elements(std::span<const DelayElement> elems, const char* where,
                       bool require_unique_ids) {
  std::unordered_set<std::string_view> seen;
  for (const DelayElement& e : elems) {
    if (e.duration <= Time{0}) {
      throw ValidationError(std::string(where) + " delay '" + e.id +
                            "' must have positive duration, got " + to_string(e.duration));
    }
    if (require_unique_ids && !seen.insert(e.id).second) {
      throw ValidationError(std::string(where) + " delay id '" + e.id + "' appears twice");
    }
  }
}

bool canonical_less(const DelayElement& a, const DelayElement& b) {
  if (a.duration != b.duration) return a.duration < b.duration;
  return a.id < b.id;
}

/// Tie-break key: sorted duration list first, sorted id list second.
struct KeyLists {
  std::vector<std::int64_t> durations;
  std::vector<std::string> ids;
};

bool lists_less(const KeyLists& a, const KeyLists& b) {
  if (a.durations != b.durations) return a.durations < b.durations;
  return a.ids < b.ids;
}

DelaySelection finish(std::vector<DelayElement> chosen, Time original_total, LeadTarget target) {
  Time retained = total_delay(chosen);
  Time saving = original_total - retained;
  return DelaySelection{
      .node_id = {},
      .chosen = std::move(chosen),
      .retained_total = retained,
      .saving = saving,
      .slack = saving - target.lead,
  };
}

/// Exact solve via count-layered suffix reachability bitsets over
/// gcd-scaled durations. Layer r of suffix j holds every sum reachable
/// with exactly r items from items[j..). The best sum S* and minimal
/// count m* fall out of suffix 0; the subset itself comes from a greedy
/// walk that always takes the earliest item whose completion stays
/// reachable. Earlier items see a superset suffix, so the walk emits the
/// lexicographically smallest duration list and, inside equal-duration
/// groups, the smallest ids - exactly the documented tie-break.
/// Returns nullopt when the table would exceed cell_ceiling bits.
std::optional<std::vector<DelayElement>> dp_select(const std::vector<DelayElement>& items,
                                                   std::int64_t budget,
                                                   std::int64_t cell_ceiling) {
  const std::size_t n = items.size();
  std::int64_t g = 0;
  for (const DelayElement& e : items) g = std::gcd(g, e.duration.ps);
  std::vector<std::int64_t> d(n);
  std::int64_t sum_scaled = 0;
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = items[i].duration.ps / g;
    sum_scaled += d[i];
  }
  const std::int64_t cap = budget / g;
  const std::int64_t b_eff = std::min(cap, sum_scaled);
  const std::int64_t min_d = *std::min_element(d.begin(), d.end());
  const std::int64_t layers =
      std::min<std::int64_t>(static_cast<std::int64_t>(n), b_eff / min_d);
  const auto cells = static_cast<__int128>(n + 1) * (layers + 1) * (b_eff + 1);
  if (cells > cell_ceiling) return std::nullopt;

  const std::size_t words = static_cast<std::size_t>(b_eff / 64 + 1);
  const std::size_t stride = static_cast<std::size_t>(layers + 1) * words;
  std::vector<std::uint64_t> table((n + 1) * stride, 0);
  auto row = [&](std::size_t j, std::int64_t r) {
    return table.data() + j * stride + static_cast<std::size_t>(r) * words;
  };
  auto test = [&](const std::uint64_t* p, std::int64_t bit) {
    return ((p[bit / 64] >> (bit % 64)) & 1u) != 0;
  };

  row(n, 0)[0] = 1;  // empty suffix reaches only the empty sum
  for (std::size_t j = n; j-- > 0;) {
    const std::size_t ws = static_cast<std::size_t>(d[j] / 64);
    const std::int64_t bs = d[j] % 64;
    for (std::int64_t r = 0; r <= layers; ++r) {
      std::uint64_t* dst = row(j, r);
      std::memcpy(dst, row(j + 1, r), words * sizeof(std::uint64_t));
      if (r == 0) continue;
      const std::uint64_t* src = row(j + 1, r - 1);
      if (bs == 0) {
        for (std::size_t i = words; i-- > ws;) dst[i] |= src[i - ws];
      } else {
        for (std::size_t i = words; i-- > ws;) {
          std::uint64_t v = src[i - ws] << bs;
          if (i - ws > 0) v |= src[i - ws - 1] >> (64 - bs);
          dst[i] |= v;
        }
      }
    }
  }

  // Bits past b_eff in the top word are sums over budget; mask them away.
  std::int64_t best_sum = -1;
  const std::int64_t top_bits = b_eff % 64 + 1;
  for (std::size_t w = words; w-- > 0 && best_sum < 0;) {
    std::uint64_t acc = 0;
    for (std::int64_t r = 1; r <= layers; ++r) acc |= row(0, r)[w];
    if (w == words - 1 && top_bits < 64) acc &= (std::uint64_t{1} << top_bits) - 1;
    if (acc != 0) best_sum = static_cast<std::int64_t>(w) * 64 + std::bit_width(acc) - 1;
  }
  assert(best_sum >= 1);

  std::int64_t best_count = 0;
  for (std::int64_t r = 1; r <= layers; ++r) {
    if (test(row(0, r), best_sum)) {
      best_count = r;
      break;
    }
  }
  assert(best_count >= 1);

  std::vector<DelayElement> chosen;
  chosen.reserve(static_cast<std::size_t>(best_count));
  std::size_t idx = 0;
  std::int64_t s = best_sum;
  for (std::int64_t r = best_count; r > 0; --r) {
    std::size_t j = idx;
    for (; j < n; ++j) {
      if (d[j] <= s && test(row(j + 1, r - 1), s - d[j])) break;
    }
    assert(j < n);
    chosen.push_back(items[j]);
    s -= d[j];
    idx = j + 1;
  }
  assert(s == 0);
  return chosen;
}

struct HalfSub {
  std::int64_t sum;
  int count;
  std::uint32_t mask;
};

std::vector<HalfSub> enumerate_half(const std::vector<DelayElement>& items, std::size_t start,
                                    std::size_t len, std::int64_t budget) {
  std::vector<std::int64_t> sums(std::size_t{1} << len, 0);
  std::vector<HalfSub> out;
  out.push_back(HalfSub{0, 0, 0});
  for (std::uint32_t mask = 1; mask < sums.size(); ++mask) {
    const int bit = std::countr_zero(mask);
    sums[mask] = sums[mask & (mask - 1)] + items[start + static_cast<std::size_t>(bit)].duration.ps;
    if (sums[mask] <= budget) {
      out.push_back(HalfSub{sums[mask], std::popcount(mask), mask});
    }
  }
  return out;
}

/// Key lists of the masked items. Mask bits walk indices ascending and the
/// items are in (duration, id) order, so durations come out sorted; ids
/// still need their own sort.
KeyLists lists_of(const std::vector<DelayElement>& items, std::size_t start, std::uint32_t mask) {
  KeyLists out;
  for (std::uint32_t m = mask; m != 0; m &= m - 1) {
    const DelayElement& e = items[start + static_cast<std::size_t>(std::countr_zero(m))];
    out.durations.push_back(e.duration.ps);
    out.ids.push_back(e.id);
  }
  std::sort(out.ids.begin(), out.ids.end());
  return out;
}

KeyLists lists_of_pair(const std::vector<DelayElement>& items, std::size_t h1, std::uint32_t m1,
                       std::uint32_t m2) {
  KeyLists a = lists_of(items, 0, m1);
  KeyLists b = lists_of(items, h1, m2);
  KeyLists out;
  out.durations.resize(a.durations.size() + b.durations.size());
  std::merge(a.durations.begin(), a.durations.end(), b.durations.begin(), b.durations.end(),
             out.durations.begin());
  out.ids = std::move(a.ids);
  out.ids.insert(out.ids.end(), b.ids.begin(), b.ids.end());
  std::sort(out.ids.begin(), out.ids.end());
  return out;
}

/// Meet-in-the-middle over the canonical item order. The right half keeps
/// one representative subset per (sum, count): merging a fixed left half
/// with two right halves of equal sum and count preserves their
/// (duration list, id list) order, so the smaller representative can
/// always stand in for the larger.
std::vector<DelayElement> mitm_select(const std::vector<DelayElement>& items,
                                      std::int64_t budget) {
  const std::size_t n = items.size();
  const std::size_t h1 = n - n / 2;
  const std::size_t h2 = n / 2;

  const std::vector<HalfSub> left = enumerate_half(items, 0, h1, budget);
  const std::vector<HalfSub> right = enumerate_half(items, h1, h2, budget);

  std::map<std::pair<std::int64_t, int>, std::uint32_t> best_right;
  for (const HalfSub& sub : right) {
    auto [it, inserted] = best_right.try_emplace({sub.sum, sub.count}, sub.mask);
    if (!inserted &&
        lists_less(lists_of(items, h1, sub.mask), lists_of(items, h1, it->second))) {
      it->second = sub.mask;
    }
  }

  std::vector<std::int64_t> right_sums;
  std::vector<std::vector<std::pair<int, std::uint32_t>>> right_entries;
  for (const auto& [key, mask] : best_right) {
    if (right_sums.empty() || right_sums.back() != key.first) {
      right_sums.push_back(key.first);
      right_entries.emplace_back();
    }
    right_entries.back().emplace_back(key.second, mask);
  }

  std::int64_t best_sum = -1;
  for (const HalfSub& sub : left) {
    auto it = std::upper_bound(right_sums.begin(), right_sums.end(), budget - sub.sum);
    if (it == right_sums.begin()) continue;
    best_sum = std::max(best_sum, sub.sum + *std::prev(it));
  }
  assert(best_sum >= 1);

  auto exact_right = [&](std::int64_t need) -> const std::vector<std::pair<int, std::uint32_t>>* {
    auto it = std::lower_bound(right_sums.begin(), right_sums.end(), need);
    if (it == right_sums.end() || *it != need) return nullptr;
    return &right_entries[static_cast<std::size_t>(it - right_sums.begin())];
  };

  int best_count = static_cast<int>(n) + 1;
  for (const HalfSub& sub : left) {
    if (sub.sum > best_sum) continue;
    if (const auto* entries = exact_right(best_sum - sub.sum)) {
      best_count = std::min(best_count, sub.count + entries->front().first);
    }
  }
  assert(best_count <= static_cast<int>(n));

  std::optional<KeyLists> incumbent;
  std::pair<std::uint32_t, std::uint32_t> best_masks{0, 0};
  for (const HalfSub& sub : left) {
    if (sub.sum > best_sum) continue;
    const auto* entries = exact_right(best_sum - sub.sum);
    if (entries == nullptr) continue;
    for (const auto& [count, mask] : *entries) {
      if (sub.count + count != best_count) continue;
      KeyLists cand = lists_of_pair(items, h1, sub.mask, mask);
      if (!incumbent || lists_less(cand, *incumbent)) {
        incumbent = std::move(cand);
        best_masks = {sub.mask, mask};
      }
    }
  }
  assert(incumbent.has_value());

  std::vector<DelayElement> chosen;
  for (std::uint32_t m = best_masks.first; m != 0; m &= m - 1) {
    chosen.push_back(items[static_cast<std::size_t>(std::countr_zero(m))]);
  }
  for (std::uint32_t m = best_masks.second; m != 0; m &= m - 1) {
    chosen.push_back(items[h1 + static_cast<std::size_t>(std::countr_zero(m))]);
  }
  return chosen;
}

Time min_pool_duration(const DelayPool& pool) {
  Time min = pool.elements.front().duration;
  for (const DelayElement& e : pool.elements) min = std::min(min, e.duration);
  return min;
}

TransitTimes require_synchronized_link(const NodeLink& link, const MediumProfile& medium) {
  TransitTimes t = transit_times(link, medium);
  if (t.quantum != t.classical) {
    throw NotSynchronized("link '" + link.node_id + "' is not synchronized: quantum arrives at " +
                          to_string(t.quantum) + ", classical at " + to_string(t.classical));
  }
  return t;
}

}  // namespace

DelaySelection select_delays(std::span<const DelayElement> original, const DelayPool& pool,
                             LeadTarget target, const SelectOptions& options) {
  require_lead(target);
  validate_elements(original, "original", false);
  validate_elements(pool.elements, "pool", true);
  if (pool.elements.empty()) {
    throw Infeasible("delay pool is empty");
  }

  const Time original_total = total_delay(original);
  const Time pool_total = total_delay(pool.elements);  // also guards subset sums below
  const Time budget = original_total - target.lead;

  const Time min_duration = min_pool_duration(pool);
  if (min_duration > budget) {
    throw Infeasible("smallest pool delay " + to_string(min_duration) +
                     " exceeds the retained-delay budget " + to_string(budget));
  }

  std::vector<DelayElement> items(pool.elements.begin(), pool.elements.end());
  std::sort(items.begin(), items.end(), canonical_less);

  if (pool_total <= budget) {
    return finish(std::move(items), original_total, target);
  }
  std::erase_if(items, [&](const DelayElement& e) { return e.duration > budget; });

  if (auto chosen = dp_select(items, budget.ps, options.dp_cell_ceiling)) {
    return finish(std::move(*chosen), original_total, target);
  }
  if (items.size() <= options.mitm_max_pool) {
    return finish(mitm_select(items, budget.ps), original_total, target);
  }
  throw CapacityExceeded("pool of " + std::to_string(items.size()) + " delays with budget " +
                         to_string(budget) + " fits neither solver route; raise dp_cell_ceiling");
}

DelaySelection brute_force_select(std::span<const DelayElement> original, const DelayPool& pool,
                                  LeadTarget target) {
  require_lead(target);
  validate_elements(original, "original", false);
  validate_elements(pool.elements, "pool", true);
  if (pool.elements.empty()) {
    throw Infeasible("delay pool is empty");
  }
  const std::size_t n = pool.elements.size();
  if (n > 20) {
    throw PoolTooLarge("brute force handles at most 20 pool delays, got " + std::to_string(n));
  }

  const Time original_total = total_delay(original);
  total_delay(pool.elements);  // overflow guard for the subset sums below
  const Time budget = original_total - target.lead;

  const Time min_duration = min_pool_duration(pool);
  if (min_duration > budget) {
    throw Infeasible("smallest pool delay " + to_string(min_duration) +
                     " exceeds the retained-delay budget " + to_string(budget));
  }

  std::vector<DelayElement> items(pool.elements.begin(), pool.elements.end());
  std::sort(items.begin(), items.end(), canonical_less);

  std::vector<std::int64_t> sums(std::size_t{1} << n, 0);
  bool have = false;
  std::uint32_t best_mask = 0;
  std::int64_t best_sum = 0;
  int best_count = 0;
  KeyLists best_lists;
  for (std::uint32_t mask = 1; mask < sums.size(); ++mask) {
    const int bit = std::countr_zero(mask);
    sums[mask] = sums[mask & (mask - 1)] + items[static_cast<std::size_t>(bit)].duration.ps;
    if (sums[mask] > budget.ps) continue;
    const int count = std::popcount(mask);
    if (!have || sums[mask] > best_sum || (sums[mask] == best_sum && count < best_count)) {
      have = true;
      best_mask = mask;
      best_sum = sums[mask];
      best_count = count;
      best_lists = lists_of(items, 0, mask);
      continue;
    }
    if (sums[mask] == best_sum && count == best_count) {
      KeyLists cand = lists_of(items, 0, mask);
      if (lists_less(cand, best_lists)) {
        best_mask = mask;
        best_lists = std::move(cand);
      }
    }
  }
  assert(have);

  std::vector<DelayElement> chosen;
  for (std::uint32_t m = best_mask; m != 0; m &= m - 1) {
    chosen.push_back(items[static_cast<std::size_t>(std::countr_zero(m))]);
  }
  return finish(std::move(chosen), original_total, target);
}

AppliedSelection apply_selection(const NodeLink& link, const DelaySelection& selection,
                                 const MediumProfile& medium) {
  if (!selection.node_id.empty() && selection.node_id != link.node_id) {
    throw ValidationError("selection for node '" + selection.node_id + "' applied to link '" +
                          link.node_id + "'");
  }
  const Time t_quantum = photon_velocity(medium).time_over(link.quantum_length);
  const Time t_fiber = fiber_velocity(medium).time_over(link.classical_length);
  const Time t_classical = t_fiber + selection.retained_total;
  return AppliedSelection{t_classical, t_quantum - t_classical};
}

ReplaceDelaysPlan plan_replace_delays(const NodeLink& link, const DelayPool& pool,
                                      const MediumProfile& medium, LeadTarget target,
                                      const SelectOptions& options) {
  require_synchronized_link(link, medium);
  DelaySelection selection = select_delays(link.delays, pool, target, options);
  selection.node_id = link.node_id;
  const AppliedSelection applied = apply_selection(link, selection, medium);
  SyncPlan plan{
      .node_id = link.node_id,
      .model = PlanModel::ReplaceDelays,
      .new_quantum_length = link.quantum_length,
      .new_classical_length = link.classical_length,
      .chosen_delays = selection.chosen,
      .predicted_gap = applied.predicted_gap,
  };
  return ReplaceDelaysPlan{std::move(plan), std::move(selection)};
}

}  // namespace qcsync
