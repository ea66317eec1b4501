#include "doctest.h"

#include <cstdint>
#include <random>
#include <vector>

#include "qcsync/errors.hpp"
#include "qcsync/kinematics.hpp"
#include "qcsync/link.hpp"
#include "qcsync/medium.hpp"

using namespace qcsync;

namespace {

MediumProfile round_medium() {
  // c = 3e8 m/s, n_p = 5/4: photon 240 um/ps, fiber 200 um/ps. Exact
  // round numbers so every expected value below is hand-checkable.
  return MediumProfile{Rational(300'000'000, 1), Rational(5, 4)};
}

std::vector<DelayElement> two_microseconds() {
  return {{"d1", Time::from_us(1)}, {"d2", Time::from_us(1)}};
}

}  // namespace

TEST_CASE("derived velocities: v_f < v_p < c") {
  MediumProfile m = round_medium();
  CHECK(photon_velocity(m).um_per_ps() == Rational(240, 1));
  CHECK(fiber_velocity(m).um_per_ps() == Rational(200, 1));
  CHECK(vacuum_velocity(m).um_per_ps() == Rational(300, 1));
  CHECK(fiber_velocity(m) < photon_velocity(m));
  CHECK(photon_velocity(m) < vacuum_velocity(m));

  MediumProfile real{Rational(299'792'458, 1), Rational(149, 100)};
  CHECK(photon_velocity(real).um_per_ps() ==
        Rational(299'792'458, 1'000'000) / Rational(149, 100));
  CHECK(fiber_velocity(real).um_per_ps() == Rational(299'792'458, 1'000'000) * Rational(2, 3));
}

TEST_CASE("refraction index must sit strictly inside (1, 3/2)") {
  MediumProfile m = round_medium();
  m.n_p = Rational(1, 1);
  CHECK_THROWS_AS(photon_velocity(m), RefractionOutOfRange);
  m.n_p = Rational(3, 2);
  CHECK_THROWS_AS(photon_velocity(m), RefractionOutOfRange);
  m.n_p = Rational(0, 1);
  CHECK_THROWS_AS(photon_velocity(m), RefractionOutOfRange);
  m.n_p = Rational(2, 1);
  CHECK_THROWS_AS(photon_velocity(m), RefractionOutOfRange);
  m.n_p = Rational(1'000'001, 1'000'000);
  CHECK_NOTHROW(photon_velocity(m));
  m.n_p = Rational(1'499'999, 1'000'000);
  CHECK_NOTHROW(photon_velocity(m));
}

TEST_CASE("velocity conversions round half away from zero") {
  Velocity v = Velocity::from_um_per_ps(Rational(3, 2));
  CHECK(v.travel(Time{1}) == Length{2});     // 1.5 -> 2
  CHECK(v.travel(Time{-1}) == Length{-2});   // -1.5 -> -2
  CHECK(v.travel(Time{3}) == Length{5});     // 4.5 -> 5
  CHECK(v.time_over(Length{3}) == Time{2});  // 2 ps exactly
  CHECK(v.time_over(Length{1}) == Time{1});  // 2/3 -> 1
  CHECK_THROWS_AS(Velocity::from_um_per_ps(Rational(0, 1)), ValidationError);
  CHECK_THROWS_AS(Velocity::from_um_per_ps(Rational(-1, 2)), ValidationError);
  CHECK(Velocity::from_mps(Rational(300'000'000, 1)).um_per_ps() == Rational(300, 1));
  CHECK(Velocity::from_mps(Rational(300'000'000, 1)).mps() == Rational(300'000'000, 1));
}

TEST_CASE("travel then time_over is the identity for physical speeds") {
  // Any speed of at least 2 um/ps makes the roundoff under half a
  // picosecond, so the round trip is exact. Physical media sit near
  // 200-300 um/ps.
  std::mt19937_64 rng(20240817);
  std::uniform_int_distribution<std::int64_t> times(1, 1'000'000'000'000'000);
  const MediumProfile media[] = {
      round_medium(),
      MediumProfile{Rational(299'792'458, 1), Rational(1'370'001, 1'000'000)},
      MediumProfile{Rational(299'792'458, 1), Rational(1'000'001, 1'000'000)},
      MediumProfile{Rational(299'792'458, 1), Rational(1'499'999, 1'000'000)},
  };
  for (const MediumProfile& m : media) {
    for (const Velocity v : {photon_velocity(m), fiber_velocity(m)}) {
      for (int i = 0; i < 250; ++i) {
        Time t{times(rng)};
        CHECK(v.time_over(v.travel(t)) == t);
      }
    }
  }
}

TEST_CASE("quantum path length from a target transit time") {
  MediumProfile m = round_medium();
  Velocity v_p = photon_velocity(m);
  CHECK(quantum_path_length(Time::from_us(10), v_p) == Length::from_m(2400));
  CHECK(quantum_path_length(Time{1}, v_p) == Length{240});
  CHECK_THROWS_AS(quantum_path_length(Time{0}, v_p), NonPositiveTime);
  CHECK_THROWS_AS(quantum_path_length(Time{-5}, v_p), NonPositiveTime);
}

TEST_CASE("classical path length accounts for serial delays") {
  MediumProfile m = round_medium();
  Velocity v_f = fiber_velocity(m);
  auto delays = two_microseconds();
  CHECK(classical_path_length(Time::from_us(10), delays, v_f) == Length::from_m(1600));
  CHECK(classical_path_length(Time::from_us(10), {}, v_f) == Length::from_m(2000));
  // Delays that eat the whole transit time leave no fiber to build.
  CHECK_THROWS_AS(classical_path_length(Time::from_us(2), delays, v_f), DelayExceedsBudget);
  CHECK_THROWS_AS(classical_path_length(Time::from_us(1), delays, v_f), DelayExceedsBudget);
  CHECK_THROWS_AS(classical_path_length(Time{0}, delays, v_f), NonPositiveTime);
}

TEST_CASE("transit times recover the construction targets") {
  MediumProfile m = round_medium();
  Velocity v_p = photon_velocity(m);
  Velocity v_f = fiber_velocity(m);
  auto delays = two_microseconds();

  NodeLink link{"alice", quantum_path_length(Time::from_us(10), v_p),
                classical_path_length(Time::from_us(10), delays, v_f), delays};
  TransitTimes t = transit_times(link, m);
  CHECK(t.quantum == Time::from_us(10));
  CHECK(t.classical == Time::from_us(10));

  // The same recovery holds across random targets and media.
  std::mt19937_64 rng(771);
  std::uniform_int_distribution<std::int64_t> times(10'000, 1'000'000'000'000);
  std::uniform_int_distribution<std::int64_t> n_p_milli(1'001, 1'499);
  for (int i = 0; i < 250; ++i) {
    MediumProfile med{Rational(299'792'458, 1), Rational(n_p_milli(rng), 1'000)};
    Time target{times(rng)};
    std::vector<DelayElement> del;
    if (i % 3 != 0) del.push_back({"d", Time{target.ps / 4 + 1}});
    NodeLink l{"n", quantum_path_length(target, med),
               classical_path_length(target, del, med), del};
    TransitTimes got = transit_times(l, med);
    CHECK(got.quantum == target);
    CHECK(got.classical == target);
  }
}

TEST_CASE("total_delay sums serial elements") {
  auto delays = two_microseconds();
  CHECK(total_delay(delays) == Time::from_us(2));
  CHECK(total_delay({}) == Time{0});
}
