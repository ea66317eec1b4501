#include "doctest.h"

#include <cstdint>
#include <random>
#include <vector>

#include "qcsync/errors.hpp"
#include "qcsync/kinematics.hpp"
#include "qcsync/planner.hpp"
#include "qcsync/simulator.hpp"

using namespace qcsync;

namespace {

const MediumProfile kMedium{Rational(300'000'000, 1), Rational(5, 4)};  // 240 / 200 um/ps

NodeLink round_link() {
  // Both channels take exactly 10 us: quantum 2400 m at 240 um/ps,
  // classical 1600 m at 200 um/ps plus 2 us of serial delays.
  return NodeLink{"alice",
                  Length::from_m(2400),
                  Length::from_m(1600),
                  {{"d1", Time::from_us(1)}, {"d2", Time::from_us(1)}}};
}

NodeLink synthesized_link(std::string node, Time target, std::vector<DelayElement> delays,
                          const MediumProfile& medium) {
  return NodeLink{std::move(node), quantum_path_length(target, medium),
                  classical_path_length(target, delays, medium),
                  std::move(delays)};
}

Time simulated_delta(const NodeLink& link, const MediumProfile& medium) {
  EmissionSchedule schedule;
  schedule.emissions.push_back({Time{0}, link.node_id, "p"});
  return simulate(std::span(&link, 1), medium, schedule).at(0).t_delta;
}

}  // namespace

TEST_CASE("shortening the classical fiber creates the lead") {
  NodeLink link = round_link();
  SyncPlan plan = plan_shorten_classical(link, kMedium, LeadTarget{Time::from_us(1)});
  CHECK(plan.node_id == "alice");
  CHECK(plan.model == PlanModel::ShortenClassical);
  CHECK(plan.new_quantum_length == Length::from_m(2400));
  CHECK(plan.new_classical_length == Length::from_m(1400));
  CHECK(!plan.chosen_delays.has_value());
  CHECK(plan.predicted_gap == Time::from_us(1));

  NodeLink applied = apply_plan(link, plan);
  CHECK(simulated_delta(applied, kMedium) == -Time::from_us(1));
}

TEST_CASE("lengthening the quantum fiber creates the lead") {
  NodeLink link = round_link();
  SyncPlan plan = plan_lengthen_pmf(link, kMedium, LeadTarget{Time::from_us(1)});
  CHECK(plan.model == PlanModel::LengthenPmf);
  CHECK(plan.new_quantum_length == Length::from_m(2640));
  CHECK(plan.new_classical_length == Length::from_m(1600));
  CHECK(plan.predicted_gap == Time::from_us(1));
  CHECK(simulated_delta(apply_plan(link, plan), kMedium) == -Time::from_us(1));
}

TEST_CASE("zero lead is a valid no-op plan") {
  NodeLink link = round_link();
  SyncPlan shorten = plan_shorten_classical(link, kMedium, LeadTarget{Time{0}});
  CHECK(shorten.new_classical_length == link.classical_length);
  CHECK(shorten.predicted_gap == Time{0});
  SyncPlan lengthen = plan_lengthen_pmf(link, kMedium, LeadTarget{Time{0}});
  CHECK(lengthen.new_quantum_length == link.quantum_length);
  CHECK(lengthen.predicted_gap == Time{0});
}

TEST_CASE("planning rejects bad inputs") {
  NodeLink link = round_link();
  CHECK_THROWS_AS(plan_shorten_classical(link, kMedium, LeadTarget{Time{-1}}), ValidationError);
  CHECK_THROWS_AS(plan_lengthen_pmf(link, kMedium, LeadTarget{Time{-1}}), ValidationError);

  // 8 us of lead needs all 1600 m of cable; nothing remains.
  CHECK_THROWS_AS(plan_shorten_classical(link, kMedium, LeadTarget{Time::from_us(8)}),
                  LengthUnderflow);
  CHECK_NOTHROW(plan_shorten_classical(link, kMedium, LeadTarget{Time{7'999'999}}));

  NodeLink skewed = round_link();
  skewed.classical_length = Length::from_m(1601);
  CHECK_THROWS_AS(plan_shorten_classical(skewed, kMedium, LeadTarget{Time{0}}), NotSynchronized);
  CHECK_THROWS_AS(plan_lengthen_pmf(skewed, kMedium, LeadTarget{Time{0}}), NotSynchronized);
}

TEST_CASE("plan then simulate hits the lead exactly for constructed links") {
  std::mt19937_64 rng(424242);
  std::uniform_int_distribution<std::int64_t> times(1'000'000, 1'000'000'000);
  std::uniform_int_distribution<std::int64_t> n_p_micro(1'000'001, 1'499'999);
  std::uniform_int_distribution<int> delay_count(0, 4);
  for (int i = 0; i < 200; ++i) {
    MediumProfile medium{Rational(299'792'458, 1), Rational(n_p_micro(rng), 1'000'000)};
    Time target{times(rng)};
    std::vector<DelayElement> delays;
    int k = delay_count(rng);
    for (int d = 0; d < k; ++d) {
      std::uniform_int_distribution<std::int64_t> dur(1, target.ps / (2 * k));
      delays.push_back({"d" + std::to_string(d), Time{dur(rng)}});
    }
    NodeLink link = synthesized_link("n", target, delays, medium);
    std::uniform_int_distribution<std::int64_t> leads(0, (target - total_delay(delays)).ps / 2);
    Time lead{leads(rng)};

    SyncPlan shorten = plan_shorten_classical(link, medium, LeadTarget{lead});
    CHECK(shorten.predicted_gap == lead);
    CHECK(simulated_delta(apply_plan(link, shorten), medium) == -lead);

    SyncPlan lengthen = plan_lengthen_pmf(link, medium, LeadTarget{lead});
    CHECK(lengthen.predicted_gap == lead);
    CHECK(simulated_delta(apply_plan(link, lengthen), medium) == -lead);
  }
}

TEST_CASE("multinode planning isolates per-node failures") {
  NodeLink good = round_link();
  NodeLink doomed = round_link();
  doomed.node_id = "bob";
  std::vector<NodeLink> links{good, doomed};
  std::vector<LeadTarget> targets{LeadTarget{Time::from_us(1)}, LeadTarget{Time::from_us(8)}};

  MultiNodePlan plan =
      plan_multinode(links, kMedium, targets, PlanModel::ShortenClassical);
  REQUIRE(plan.plans.size() == 1);
  REQUIRE(plan.errors.size() == 1);
  CHECK(plan.plans[0].node_id == "alice");
  CHECK(plan.errors[0].node_id == "bob");
  CHECK(plan.errors[0].code == ErrorCode::LengthUnderflow);

  std::vector<LeadTarget> short_targets{targets[0]};
  CHECK_THROWS_AS(plan_multinode(links, kMedium, short_targets, PlanModel::ShortenClassical),
                  ValidationError);
  CHECK_THROWS_AS(plan_multinode(links, kMedium, targets, PlanModel::ReplaceDelays),
                  ValidationError);
}

TEST_CASE("apply_plan guards its inputs") {
  NodeLink link = round_link();
  SyncPlan plan = plan_shorten_classical(link, kMedium, LeadTarget{Time::from_us(1)});
  plan.node_id = "bob";
  CHECK_THROWS_AS(apply_plan(link, plan), ValidationError);

  SyncPlan replace;
  replace.node_id = "alice";
  replace.model = PlanModel::ReplaceDelays;
  replace.new_quantum_length = link.quantum_length;
  replace.new_classical_length = link.classical_length;
  CHECK_THROWS_AS(apply_plan(link, replace), ValidationError);  // no chosen delays
}

TEST_CASE("plan model names round-trip") {
  CHECK(to_string(PlanModel::ShortenClassical) == "shorten_classical");
  CHECK(to_string(PlanModel::LengthenPmf) == "lengthen_pmf");
  CHECK(to_string(PlanModel::ReplaceDelays) == "replace_delays");
  CHECK(plan_model_from_string("shorten_classical") == PlanModel::ShortenClassical);
  CHECK(plan_model_from_string("lengthen_pmf") == PlanModel::LengthenPmf);
  CHECK(plan_model_from_string("replace_delays") == PlanModel::ReplaceDelays);
  CHECK_THROWS_AS(plan_model_from_string("bogus"), ParseError);
}
