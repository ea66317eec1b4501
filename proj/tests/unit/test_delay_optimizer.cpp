#include "doctest.h"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qcsync/delay_optimizer.hpp"
#include "qcsync/errors.hpp"
#include "qcsync/kinematics.hpp"
#include "qcsync/planner.hpp"
#include "qcsync/simulator.hpp"

using namespace qcsync;

namespace {

const MediumProfile kMedium{Rational(300'000'000, 1), Rational(5, 4)};  // 240 / 200 um/ps

std::vector<DelayElement> us_delays(std::initializer_list<std::int64_t> us) {
  std::vector<DelayElement> out;
  int i = 0;
  for (std::int64_t v : us) {
    out.push_back({"o" + std::to_string(i++), Time::from_us(v)});
  }
  return out;
}

DelayPool us_pool(std::initializer_list<std::int64_t> us) {
  DelayPool pool;
  for (std::int64_t v : us) {
    pool.elements.push_back({"p" + std::to_string(v), Time::from_us(v)});
  }
  return pool;
}

std::vector<std::string> ids_of(const DelaySelection& s) {
  std::vector<std::string> out;
  for (const DelayElement& e : s.chosen) out.push_back(e.id);
  return out;
}

// Either both calls produce the same selection, or both fail with the
// same code and message.
void check_agreement(const std::vector<DelayElement>& original, const DelayPool& pool,
                     LeadTarget target, const SelectOptions& options = {}) {
  bool threw = false;
  DelaySelection fast;
  ErrorCode fast_code{};
  std::string fast_msg;
  try {
    fast = select_delays(original, pool, target, options);
  } catch (const Error& e) {
    threw = true;
    fast_code = e.code();
    fast_msg = e.what();
  }
  try {
    DelaySelection slow = brute_force_select(original, pool, target);
    REQUIRE(!threw);
    CHECK(fast == slow);
  } catch (const Error& e) {
    REQUIRE(threw);
    CHECK(fast_code == e.code());
    CHECK(fast_msg == e.what());
  }
}

}  // namespace

TEST_CASE("worked selection: budget 9 us out of a five element pool") {
  // Originals hold 15 us; a 6 us lead leaves a 9 us retained budget.
  // {2,7} reaches 9 with two elements, beating {1,3,5} on count.
  auto original = us_delays({3, 5, 7});
  DelayPool pool = us_pool({1, 2, 3, 5, 7});
  DelaySelection sel = select_delays(original, pool, LeadTarget{Time::from_us(6)});
  CHECK(ids_of(sel) == std::vector<std::string>{"p2", "p7"});
  CHECK(sel.retained_total == Time::from_us(9));
  CHECK(sel.saving == Time::from_us(6));
  CHECK(sel.slack == Time{0});
  CHECK(sel.chosen[0].duration == Time::from_us(2));
  CHECK(sel.chosen[1].duration == Time::from_us(7));
}

TEST_CASE("selection reports positive slack when the budget cannot be met exactly") {
  auto original = us_delays({3, 5, 7});
  DelayPool pool = us_pool({2, 7});
  DelaySelection sel = select_delays(original, pool, LeadTarget{Time::from_us(5)});
  CHECK(sel.retained_total == Time::from_us(9));  // best under the 10 us budget
  CHECK(sel.saving == Time::from_us(6));
  CHECK(sel.slack == Time::from_us(1));
}

TEST_CASE("tie breaking: fewer elements beats more") {
  auto original = us_delays({4});
  DelayPool pool;
  pool.elements = {{"a", Time::from_us(1)}, {"b", Time::from_us(3)}, {"c", Time::from_us(4)}};
  DelaySelection sel = select_delays(original, pool, LeadTarget{Time{0}});
  CHECK(ids_of(sel) == std::vector<std::string>{"c"});
}

TEST_CASE("tie breaking: lexicographically smaller duration list") {
  auto original = us_delays({5});
  DelayPool pool;
  pool.elements = {{"a", Time::from_us(1)},
                   {"b", Time::from_us(4)},
                   {"c", Time::from_us(2)},
                   {"d", Time::from_us(3)}};
  DelaySelection sel = select_delays(original, pool, LeadTarget{Time{0}});
  // {1,4} and {2,3} both retain 5 with two elements; [1,4] < [2,3].
  CHECK(ids_of(sel) == std::vector<std::string>{"a", "b"});
}

TEST_CASE("tie breaking: smaller id list at equal durations") {
  auto original = us_delays({5});
  DelayPool pool;
  pool.elements = {{"z", Time::from_us(2)}, {"a", Time::from_us(2)}, {"m", Time::from_us(3)}};
  DelaySelection sel = select_delays(original, pool, LeadTarget{Time{0}});
  CHECK(ids_of(sel) == std::vector<std::string>{"a", "m"});

  DelayPool two_same;
  two_same.elements = {{"beta", Time::from_us(2)}, {"alpha", Time::from_us(2)}};
  DelaySelection only = select_delays(us_delays({2}), two_same, LeadTarget{Time{0}});
  CHECK(ids_of(only) == std::vector<std::string>{"alpha"});
}

TEST_CASE("infeasible exactly when the smallest pool delay overshoots") {
  auto original = us_delays({3});  // budget = 3 - lead
  DelayPool pool = us_pool({2, 5});

  CHECK_NOTHROW(select_delays(original, pool, LeadTarget{Time::from_us(1)}));
  // budget 1 us < min 2 us
  CHECK_THROWS_AS(select_delays(original, pool, LeadTarget{Time::from_us(2)}), Infeasible);
  // budget == min is feasible
  DelaySelection sel = select_delays(original, pool, LeadTarget{Time::from_us(1)});
  CHECK(sel.retained_total == Time::from_us(2));

  DelayPool empty;
  CHECK_THROWS_AS(select_delays(original, empty, LeadTarget{Time{0}}), Infeasible);
  CHECK_THROWS_AS(brute_force_select(original, empty, LeadTarget{Time{0}}), Infeasible);

  // A lead beyond the original total makes the budget negative.
  CHECK_THROWS_AS(select_delays(original, pool, LeadTarget{Time::from_us(9)}), Infeasible);
}

TEST_CASE("whole pool fits: everything is retained") {
  auto original = us_delays({10});
  DelayPool pool = us_pool({1, 2, 3});
  DelaySelection sel = select_delays(original, pool, LeadTarget{Time::from_us(4)});
  CHECK(ids_of(sel) == std::vector<std::string>{"p1", "p2", "p3"});
  CHECK(sel.retained_total == Time::from_us(6));
  CHECK(sel.slack == Time{0});
}

TEST_CASE("input validation") {
  auto original = us_delays({3});
  DelayPool bad;
  bad.elements = {{"x", Time{0}}};
  CHECK_THROWS_AS(select_delays(original, bad, LeadTarget{Time{0}}), ValidationError);
  bad.elements = {{"x", Time{-5}}};
  CHECK_THROWS_AS(select_delays(original, bad, LeadTarget{Time{0}}), ValidationError);
  bad.elements = {{"x", Time{5}}, {"x", Time{6}}};
  CHECK_THROWS_AS(select_delays(original, bad, LeadTarget{Time{0}}), ValidationError);

  DelayPool pool = us_pool({1});
  CHECK_THROWS_AS(select_delays(original, pool, LeadTarget{Time{-1}}), ValidationError);
  std::vector<DelayElement> dup_orig{{"o", Time{5}}, {"o", Time{6}}};
  CHECK_THROWS_AS(select_delays(dup_orig, pool, LeadTarget{Time{0}}), ValidationError);

  DelayPool huge;
  huge.elements = {{"a", Time{6'000'000'000'000'000'000}},
                   {"b", Time{6'000'000'000'000'000'000}}};
  CHECK_THROWS_AS(select_delays(us_delays({1}), huge, LeadTarget{Time{0}}), OverflowError);
}

TEST_CASE("brute force is capped at 20 pool elements") {
  DelayPool pool;
  for (int i = 0; i < 21; ++i) {
    pool.elements.push_back({"e" + std::to_string(i), Time{i + 1}});
  }
  CHECK_THROWS_AS(brute_force_select(us_delays({1}), pool, LeadTarget{Time{0}}), PoolTooLarge);
  pool.elements.pop_back();
  CHECK_NOTHROW(brute_force_select(us_delays({1}), pool, LeadTarget{Time{0}}));
}

TEST_CASE("both solver routes return the identical selection") {
  auto original = us_delays({3, 5, 7});
  DelayPool pool = us_pool({1, 2, 3, 5, 7});
  LeadTarget target{Time::from_us(6)};

  DelaySelection via_table = select_delays(original, pool, target);  // fits the default ceiling
  SelectOptions force_pairs;
  force_pairs.dp_cell_ceiling = 1;  // drives the split enumeration route
  DelaySelection via_split = select_delays(original, pool, target, force_pairs);
  CHECK(via_table == via_split);
  CHECK(via_table == brute_force_select(original, pool, target));
}

TEST_CASE("oversized problems fail with CapacityExceeded") {
  SelectOptions tiny;
  tiny.dp_cell_ceiling = 1;
  tiny.mitm_max_pool = 2;
  auto original = us_delays({9});
  DelayPool pool = us_pool({1, 2, 3});
  // budget 5 us < pool total 6 us, so a real search is needed and both
  // routes are shut off.
  CHECK_THROWS_AS(select_delays(original, pool, LeadTarget{Time::from_us(4)}, tiny),
                  CapacityExceeded);
  // The trivial verdicts still come first, whatever the limits.
  DelayPool big_only = us_pool({11});
  CHECK_THROWS_AS(select_delays(original, big_only, LeadTarget{Time::from_us(2)}, tiny),
                  Infeasible);
  DelayPool fits = us_pool({1, 2, 3});
  DelaySelection whole = select_delays(original, fits, LeadTarget{Time{0}}, tiny);
  CHECK(whole.retained_total == Time::from_us(6));
}

TEST_CASE("randomized agreement between solver and exhaustive oracle") {
  std::mt19937_64 rng(987654321);
  std::uniform_int_distribution<int> pool_size(1, 10);
  std::uniform_int_distribution<int> orig_size(0, 5);
  std::uniform_int_distribution<std::int64_t> small_dur(1, 40);
  std::uniform_int_distribution<std::int64_t> scaled_dur(1, 30);
  std::uniform_int_distribution<int> mode(0, 2);

  for (int round = 0; round < 300; ++round) {
    int m = mode(rng);
    auto gen = [&](int idx) -> Time {
      if (m == 0) return Time{small_dur(rng)};
      if (m == 1) return Time{scaled_dur(rng) * 1'000};  // common factor, table route
      return Time{small_dur(rng) * 7 + idx % 3};         // mixed residues
    };
    std::vector<DelayElement> original;
    int n_orig = orig_size(rng);
    for (int i = 0; i < n_orig; ++i) original.push_back({"o" + std::to_string(i), gen(i)});
    DelayPool pool;
    int n_pool = pool_size(rng);
    for (int i = 0; i < n_pool; ++i) pool.elements.push_back({"p" + std::to_string(i), gen(i)});

    Time orig_total = total_delay(original);
    std::uniform_int_distribution<std::int64_t> lead_dist(0, orig_total.ps + 5);
    LeadTarget target{Time{lead_dist(rng)}};

    check_agreement(original, pool, target);
    // The split route must agree bit for bit as well.
    SelectOptions force_pairs;
    force_pairs.dp_cell_ceiling = 1;
    check_agreement(original, pool, target, force_pairs);
  }
}

TEST_CASE("duplicate durations across distinct ids stay distinct elements") {
  auto original = us_delays({4});
  DelayPool pool;
  pool.elements = {{"a", Time::from_us(2)}, {"b", Time::from_us(2)}, {"c", Time::from_us(2)}};
  DelaySelection sel = select_delays(original, pool, LeadTarget{Time{0}});
  CHECK(ids_of(sel) == std::vector<std::string>{"a", "b"});
  CHECK(sel.retained_total == Time::from_us(4));
}

TEST_CASE("applying a selection recomputes the classical arrival") {
  // 20 us transit: 1000 m of fiber (5 us) plus 15 us of delays.
  std::vector<DelayElement> original = us_delays({3, 5, 7});
  NodeLink link{"alice", quantum_path_length(Time::from_us(20), kMedium),
                Length::from_m(1000), original};
  REQUIRE(transit_times(link, kMedium).classical == Time::from_us(20));

  DelaySelection sel =
      select_delays(original, us_pool({1, 2, 3, 5, 7}), LeadTarget{Time::from_us(6)});
  sel.node_id = "alice";
  AppliedSelection applied = apply_selection(link, sel, kMedium);
  CHECK(applied.new_t_classical == Time::from_us(14));
  CHECK(applied.predicted_gap == Time::from_us(6));

  DelaySelection foreign = sel;
  foreign.node_id = "bob";
  CHECK_THROWS_AS(apply_selection(link, foreign, kMedium), ValidationError);
}

TEST_CASE("replace-delays planning round trip") {
  std::vector<DelayElement> original = us_delays({3, 5, 7});
  NodeLink link{"alice", quantum_path_length(Time::from_us(20), kMedium),
                Length::from_m(1000), original};
  DelayPool pool = us_pool({1, 2, 3, 5, 7});

  ReplaceDelaysPlan planned =
      plan_replace_delays(link, pool, kMedium, LeadTarget{Time::from_us(6)});
  CHECK(planned.plan.model == PlanModel::ReplaceDelays);
  CHECK(planned.plan.node_id == "alice");
  CHECK(planned.plan.new_quantum_length == link.quantum_length);
  CHECK(planned.plan.new_classical_length == link.classical_length);
  CHECK(planned.plan.predicted_gap == Time::from_us(6));
  CHECK(planned.selection.node_id == "alice");
  REQUIRE(planned.plan.chosen_delays.has_value());
  CHECK(*planned.plan.chosen_delays == planned.selection.chosen);

  NodeLink applied = apply_plan(link, planned.plan);
  EmissionSchedule schedule;
  schedule.emissions.push_back({Time{0}, "alice", "p"});
  auto events = simulate(std::span(&applied, 1), kMedium, schedule);
  CHECK(events.at(0).t_delta == -Time::from_us(6));

  NodeLink skewed = link;
  skewed.classical_length = Length::from_m(1001);
  CHECK_THROWS_AS(plan_replace_delays(skewed, pool, kMedium, LeadTarget{Time::from_us(6)}),
                  NotSynchronized);
}
