#pragma once

#include "qcsync/rational.hpp"
#include "qcsync/units.hpp"

namespace qcsync {

/// Propagation speed as an exact rational in micrometers per picosecond.
/// Length<->time conversions round half away from zero in 128-bit
/// arithmetic, which keeps round trips exact for any physical medium.
class Velocity {
public:
  static Velocity from_um_per_ps(const Rational& v);
  static Velocity from_mps(const Rational& metres_per_second);

  const Rational& um_per_ps() const noexcept { return um_per_ps_; }
  Rational mps() const;

  /// Distance covered in t, rounded to integer micrometers.
  Length travel(Time t) const;
  /// Time to cover l, rounded to integer picoseconds.
  Time time_over(Length l) const;

  bool operator==(const Velocity&) const = default;
  auto operator<=>(const Velocity&) const = default;

private:
  explicit Velocity(Rational v) : um_per_ps_(v) {}
  Rational um_per_ps_{0, 1};
};

/// Transmission media pair for one scenario: the vacuum light speed, the
/// PMF refraction index n_p with 1 < n_p < 3/2, and the derived speeds
/// v_p = c/n_p (quantum channel) and v_f = (2/3)c (classical fiber).
struct MediumProfile {
  Rational c_vacuum_mps{299'792'458, 1};
  Rational n_p{0, 1};

  bool operator==(const MediumProfile&) const = default;
};

/// v_p = c / n_p. Throws RefractionOutOfRange unless 1 < n_p < 3/2.
Velocity photon_velocity(const MediumProfile& medium);

/// v_f = (2/3) c for silica fiber.
Velocity fiber_velocity(const MediumProfile& medium);

/// c itself, as a Velocity, for ordering checks v_f < v_p < c.
Velocity vacuum_velocity(const MediumProfile& medium);

}  // namespace qcsync
