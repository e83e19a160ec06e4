#pragma once

#include <algorithm>
#include <cmath>
#include <memory>

#include "hym/errors.hpp"
#include "hym/jet.hpp"
#include "hym/precision.hpp"
#include "hym/radial_solver.hpp"

namespace hym {

/// eps = eps_bar * 8 pi r0^{3/2}: the factor that maps
///   Lap u = 4 pi^2 eps^-2 (e^{2u} - r^2 e^{-2u}) on B_{2 r0}, u = ln(2 r0)/2
/// onto the unit-disc problem via ubar = 2u - ln(2 r0), r -> r / (2 r0).
inline double physical_epsilon(double eps_bar, double r0) {
  return eps_bar * 8.0 * pi<double>() * std::pow(r0, 1.5);
}
inline double rescaled_epsilon(double eps, double r0) {
  return eps / (8.0 * pi<double>() * std::pow(r0, 1.5));
}
template <typename T>
T to_rescaled_value(const T& u, double r0) {
  using std::log;
  return T(2) * u - log(T(2 * r0));
}
template <typename T>
T to_physical_value(const T& ubar, double r0) {
  using std::log;
  return (ubar + log(T(2 * r0))) / T(2);
}

/// Smooth evaluator of a rescaled radial solution mapped to B_{2 r0}.
/// Between mesh nodes v = u - ln r is interpolated by quintic Hermite
/// polynomials in s = ln r; below the first positive node the even
/// interpolant in r^2 through nodes 0..3 is used.
template <typename Scalar = Real>
class PhysicalProfile {
 public:
  PhysicalProfile(std::shared_ptr<const RadialSolution<Scalar>> sol, double r0)
      : sol_(std::move(sol)), r0_(r0) {
    if (!(r0 > 0)) throw ValidationError("rescale_to_physical: r0 must be positive");
    if (!sol_ || sol_->vs.size() != sol_->values.size())
      throw ValidationError("rescale_to_physical: solution has no derivative reconstruction");
  }

  double r0() const { return r0_; }
  double epsilon_bar() const { return sol_->epsilon; }
  double epsilon() const { return physical_epsilon(sol_->epsilon, r0_); }
  const RadialSolution<Scalar>& rescaled() const { return *sol_; }

  /// (ubar, ubar', ubar'') at rescaled radius rho in [0, 1].
  Jet<Scalar> ubar(const Scalar& rho) const {
    using std::log;
    if (rho < Scalar(0) || rho > Scalar(1))
      throw ValidationError("PhysicalProfile: radius outside the chart disc");
    const auto& mesh = sol_->mesh;
    if (rho < mesh.r(1)) return pole_jet(rho);
    const auto v = vbar(rho);
    return {v.v + log(rho), v.d1 + Scalar(1) / rho, v.d2 - Scalar(1) / (rho * rho)};
  }

  /// (vbar, vbar', vbar'') at rescaled radius rho in (0, 1].
  Jet<Scalar> vbar(const Scalar& rho) const {
    using std::log;
    const auto& mesh = sol_->mesh;
    if (!(rho > Scalar(0)) || rho > Scalar(1))
      throw ValidationError("PhysicalProfile: vbar needs 0 < r <= 1");
    if (rho < mesh.r(1)) {
      const auto u = pole_jet(rho);
      return {u.v - log(rho), u.d1 - Scalar(1) / rho, u.d2 + Scalar(1) / (rho * rho)};
    }
    const Scalar s = log(rho);
    const Scalar h = mesh.h();
    int k = 1 + static_cast<int>(to_double((s - mesh.s(1)) / h));
    k = std::clamp(k, 1, mesh.n() - 1);
    const Scalar t = (s - mesh.s(k)) / h;
    // Quintic Hermite on [0, 1] with value, slope and curvature at both ends.
    const auto& S = *sol_;
    const Scalar p0 = S.values[k] - mesh.s(k), p1 = S.values[k + 1] - mesh.s(k + 1);
    const Scalar m0 = S.vs[k] * h, m1 = S.vs[k + 1] * h;
    const Scalar a0 = S.vss[k] * h * h, a1 = S.vss[k + 1] * h * h;
    const Scalar t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
    const Scalar c3 = Scalar(10) * (p1 - p0) - Scalar(6) * m0 - Scalar(4) * m1 -
                      Scalar(3) * a0 / Scalar(2) + a1 / Scalar(2);
    const Scalar c4 = Scalar(-15) * (p1 - p0) + Scalar(8) * m0 + Scalar(7) * m1 +
                      Scalar(3) * a0 / Scalar(2) - a1;
    const Scalar c5 = Scalar(6) * (p1 - p0) - Scalar(3) * (m0 + m1) - a0 / Scalar(2) +
                      a1 / Scalar(2);
    const Scalar v = p0 + m0 * t + a0 / Scalar(2) * t2 + c3 * t3 + c4 * t4 + c5 * t5;
    const Scalar vt = m0 + a0 * t + Scalar(3) * c3 * t2 + Scalar(4) * c4 * t3 + Scalar(5) * c5 * t4;
    const Scalar vtt = a0 + Scalar(6) * c3 * t + Scalar(12) * c4 * t2 + Scalar(20) * c5 * t3;
    const Scalar vs = vt / h, vss = vtt / (h * h);
    return {v, vs / rho, (vss - vs) / (rho * rho)};
  }

  /// Physical u and its r-derivatives at radius r in [0, 2 r0].
  Jet<Scalar> u(const Scalar& r) const {
    const Scalar two_r0 = Scalar(2 * r0_);
    const auto ub = ubar(r / two_r0);
    return {to_physical_value(ub.v, r0_), ub.d1 / (Scalar(2) * two_r0),
            ub.d2 / (Scalar(2) * two_r0 * two_r0)};
  }

  /// w = u - ln(r)/2 = vbar(r / (2 r0)) / 2 at radius r in (0, 2 r0].
  Jet<Scalar> w(const Scalar& r) const {
    const Scalar two_r0 = Scalar(2 * r0_);
    const auto vb = vbar(r / two_r0);
    return {vb.v / Scalar(2), vb.d1 / (Scalar(2) * two_r0), vb.d2 / (Scalar(2) * two_r0 * two_r0)};
  }

  /// Residual of the physical equation at radius r > 0.
  Scalar residual(const Scalar& r) const {
    using std::exp;
    const auto j = u(r);
    const Scalar e = Scalar(epsilon());
    const Scalar lap = j.d2 + j.d1 / r;
    return lap - Scalar(4) * pi<Scalar>() * pi<Scalar>() / (e * e) *
                     (exp(Scalar(2) * j.v) - r * r * exp(Scalar(-2) * j.v));
  }

 private:
  Jet<Scalar> pole_jet(const Scalar& rho) const {
    // Lagrange cubic in q = rho^2 through nodes 0..3.
    const auto& mesh = sol_->mesh;
    Scalar q[4];
    for (int m = 0; m < 4; ++m) q[m] = mesh.r(m) * mesh.r(m);
    const Scalar x = rho * rho;
    Scalar p = 0, dp = 0, d2p = 0;
    for (int m = 0; m < 4; ++m) {
      Scalar denom = 1;
      for (int j = 0; j < 4; ++j)
        if (j != m) denom *= q[m] - q[j];
      // Basis numerator prod_{j != m}(x - q_j) and its derivatives.
      Scalar n0 = 1, n1 = 0, n2 = 0;
      for (int j = 0; j < 4; ++j) {
        if (j == m) continue;
        const Scalar f = x - q[j];
        n2 = n2 * f + Scalar(2) * n1;
        n1 = n1 * f + n0;
        n0 = n0 * f;
      }
      p += sol_->values[m] * n0 / denom;
      dp += sol_->values[m] * n1 / denom;
      d2p += sol_->values[m] * n2 / denom;
    }
    return {p, Scalar(2) * rho * dp, Scalar(2) * dp + Scalar(4) * x * d2p};
  }

  std::shared_ptr<const RadialSolution<Scalar>> sol_;
  double r0_;
};

template <typename Scalar>
PhysicalProfile<Scalar> rescale_to_physical(RadialSolution<Scalar> sol, double r0) {
  return PhysicalProfile<Scalar>(
      std::make_shared<const RadialSolution<Scalar>>(std::move(sol)), r0);
}

}  // namespace hym
