#pragma once

#include "hym/errors.hpp"
#include "hym/jet.hpp"

namespace hym {

/// rho(s), s = r^2: 1 for s <= r0^2, 0 for s >= (4 r0 / 3)^2, quintic
/// smoothstep in between (C^2 at both junctions, nonincreasing).
class CutoffProfile {
 public:
  explicit CutoffProfile(double r0) : r0_(r0) {
    if (!(r0 > 0)) throw ValidationError("cutoff: r0 must be positive");
  }

  double r0() const { return r0_; }
  double inner_radius() const { return r0_; }
  double outer_radius() const { return 4 * r0_ / 3; }
  double s_in() const { return r0_ * r0_; }
  double s_out() const { return outer_radius() * outer_radius(); }

  double operator()(double s) const { return in_s(s).v; }

  /// (rho, rho_s, rho_ss) at s.
  Jet<double> in_s(double s) const {
    if (!(s >= 0)) throw ValidationError("cutoff: s must be nonnegative");
    if (s <= s_in()) return Jet<double>::constant(1);
    if (s >= s_out()) return Jet<double>::constant(0);
    const double L = s_out() - s_in();
    const double t = (s - s_in()) / L;
    // 1 - (10 t^3 - 15 t^4 + 6 t^5)
    const double t2 = t * t;
    const double v = 1 - t2 * t * (10 - 15 * t + 6 * t2);
    const double d1 = -30 * t2 * (1 - t) * (1 - t);
    const double d2 = -60 * t * (1 - t) * (1 - 2 * t);
    return {v, d1 / L, d2 / (L * L)};
  }

  /// (rho, d/dr, d^2/dr^2) of rho(r^2).
  Jet<double> in_r(double r) const {
    const auto j = in_s(r * r);
    return {j.v, 2 * r * j.d1, 2 * j.d1 + 4 * r * r * j.d2};
  }

 private:
  double r0_;
};

}  // namespace hym
