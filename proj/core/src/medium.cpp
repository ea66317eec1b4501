#include "qcsync/medium.hpp"

#include "int128_ops.hpp"
#include "qcsync/errors.hpp"

namespace qcsync {

namespace {

void require_positive_c(const MediumProfile& medium) {
  if (!medium.c_vacuum_mps.is_positive()) {
    throw ValidationError("vacuum light speed must be positive, got " +
                          medium.c_vacuum_mps.str());
  }
}

}  // namespace

Velocity Velocity::from_um_per_ps(const Rational& v) {
  if (!v.is_positive()) {
    throw ValidationError("velocity must be positive, got " + v.str());
  }
  return Velocity(v);
}

Velocity Velocity::from_mps(const Rational& metres_per_second) {
  // 1 m/s = 1e6 um per 1e12 ps = 1e-6 um/ps.
  return from_um_per_ps(metres_per_second / Rational(1'000'000, 1));
}

Rational Velocity::mps() const { return um_per_ps_ * Rational(1'000'000, 1); }

Length Velocity::travel(Time t) const {
  // Both factors fit int64, so the product fits int128 with room to spare.
  detail::int128 scaled = detail::int128(um_per_ps_.num()) * t.ps;
  return Length{detail::narrow128(
      detail::div_round_half_away(scaled, um_per_ps_.den()), "travel")};
}

Time Velocity::time_over(Length l) const {
  detail::int128 scaled = detail::int128(l.um) * um_per_ps_.den();
  return Time{detail::narrow128(
      detail::div_round_half_away(scaled, um_per_ps_.num()), "time_over")};
}

Velocity photon_velocity(const MediumProfile& medium) {
  require_positive_c(medium);
  if (!(Rational(1, 1) < medium.n_p && medium.n_p < Rational(3, 2))) {
    throw RefractionOutOfRange(
        "refraction index must satisfy 1 < n_p < 3/2, got " + medium.n_p.str());
  }
  return Velocity::from_mps(medium.c_vacuum_mps / medium.n_p);
}

Velocity fiber_velocity(const MediumProfile& medium) {
  require_positive_c(medium);
  return Velocity::from_mps(medium.c_vacuum_mps * Rational(2, 3));
}

Velocity vacuum_velocity(const MediumProfile& medium) {
  require_positive_c(medium);
  return Velocity::from_mps(medium.c_vacuum_mps);
}

}  // namespace qcsync
