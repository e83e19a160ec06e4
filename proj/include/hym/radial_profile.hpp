#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "hym/errors.hpp"
#include "hym/radial_solver.hpp"

namespace hym {

template <typename Scalar = Real>
struct ProfilePoint {
  Scalar r, v, dv, d2v;
};

/// v = u - ln r and its r-derivatives at the nodes with r > 0.
template <typename Scalar>
std::vector<ProfilePoint<Scalar>> v_profile(const RadialSolution<Scalar>& sol) {
  const auto& mesh = sol.mesh;
  std::vector<ProfilePoint<Scalar>> out;
  out.reserve(mesh.n());
  for (int k = 1; k <= mesh.n(); ++k) {
    const Scalar r = mesh.r(k);
    out.push_back({r, sol.values[k] - mesh.s(k), sol.vs[k] / r,
                   (sol.vss[k] - sol.vs[k]) / (r * r)});
  }
  return out;
}

/// Sups over nodes in [t, 1] of |v|, |v'|, |v''| and |sinh v|.
template <typename Scalar = Real>
struct MReport {
  double t = 1;
  Scalar m0 = 0, m1 = 0, m2 = 0, m3 = 0;
};

template <typename Scalar>
MReport<Scalar> m_functions(const RadialSolution<Scalar>& sol, double t) {
  using std::abs;
  using std::sinh;
  if (!(t > 0 && t <= 1)) throw ValidationError("m_functions: t must lie in (0, 1]");
  MReport<Scalar> m;
  m.t = t;
  for (const auto& p : v_profile(sol)) {
    if (p.r < Scalar(t)) continue;
    m.m0 = std::max<Scalar>(m.m0, abs(p.v));
    m.m1 = std::max<Scalar>(m.m1, abs(p.dv));
    m.m2 = std::max<Scalar>(m.m2, abs(p.d2v));
    m.m3 = std::max<Scalar>(m.m3, abs(sinh(p.v)));
  }
  return m;
}

/// Trapezoid quadrature of r^2 sinh v over [0, 1]. The mesh coordinate is
/// s = ln r, so the log-spaced panels integrate r^3 sinh v ds; the first
/// panel [0, r_1] is a trapezoid in r whose r = 0 end carries weight r^2 = 0.
template <typename Scalar>
Scalar sinh_moment(const RadialSolution<Scalar>& sol, bool in_r = false) {
  using std::exp;
  const auto& mesh = sol.mesh;
  auto f = [&](int k) {
    const Scalar r = mesh.r(k);
    const Scalar e = exp(sol.values[k]);
    return (r * e - r * r * r / e) / Scalar(2);
  };
  Scalar acc = mesh.r(1) * f(1) / Scalar(2);
  for (int k = 1; k < mesh.n(); ++k) {
    if (in_r) {
      acc += (mesh.r(k + 1) - mesh.r(k)) * (f(k) + f(k + 1)) / Scalar(2);
    } else {
      acc += mesh.h() * (mesh.r(k) * f(k) + mesh.r(k + 1) * f(k + 1)) / Scalar(2);
    }
  }
  return acc;
}

struct InequalityCheck {
  std::string name;
  double bound = 0;
  double value = 0;
  /// Signed slack, positive when the inequality holds.
  double margin = 0;
  bool pass = false;
  /// Reported but not scored.
  bool informational = false;
};

struct InequalityReport {
  double epsilon = 0;
  bool outside_regime = false;
  std::vector<InequalityCheck> checks;

  bool all_pass() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const auto& c) { return c.pass || c.informational; });
  }
};

/// Grid of t values for the M-function bounds.
inline std::vector<double> m_t_grid() { return {0.25, 0.3125, 0.375, 0.4375, 0.5}; }

template <typename Scalar>
InequalityReport verify_inequalities(const RadialSolution<Scalar>& sol) {
  using std::abs;
  using std::log;
  using std::sinh;
  using std::min;
  const double eps = sol.epsilon;
  const Scalar e = Scalar(eps);
  const auto& mesh = sol.mesh;
  const int n = mesh.n();
  InequalityReport rep;
  rep.epsilon = eps;
  rep.outside_regime = sol.outside_regime();
  auto add_le = [&](std::string name, const Scalar& value, const Scalar& bound,
                    bool informational = false) {
    rep.checks.push_back({std::move(name), to_double(bound), to_double(value),
                          to_double(bound - value), value <= bound, informational});
  };
  // Pointwise families: bound = 0, value = worst signed violation.
  auto add_sign = [&](std::string name, const Scalar& worst) {
    rep.checks.push_back({std::move(name), 0.0, to_double(-worst), to_double(worst),
                          worst > Scalar(0), false});
  };

  const auto prof = v_profile(sol);
  // Interior nodes are k = 1..n-1, i.e. prof[0..n-2].
  Scalar w_v = prof[0].v, w_dv = -prof[0].dv, w_d2v = prof[0].d2v;
  Scalar w_upper = -sol.values[1], w_lower = prof[0].v;
  Scalar w_du_pos = sol.d1[1], w_du_inv = -sol.vs[1], w_du_quad = 0;
  bool first = true;
  Scalar third_worst = 0;
  for (int i = 0; i + 1 < n; ++i) {
    const auto& p = prof[i];
    const int k = i + 1;
    w_v = min(w_v, p.v);
    w_dv = min(w_dv, -p.dv);
    w_d2v = min(w_d2v, p.d2v);
    w_upper = min(w_upper, -sol.values[k]);
    w_lower = min(w_lower, p.v);
    w_du_pos = min(w_du_pos, sol.d1[k]);
    w_du_inv = min(w_du_inv, -sol.vs[k]);
    const Scalar quad = p.r / (Scalar(2) * e * e) - sol.d1[k];
    w_du_quad = (i == 0) ? quad : min(w_du_quad, quad);
    if (i + 2 < n) {
      const auto& q = prof[i + 1];
      const Scalar tol = mesh.h() * std::max<Scalar>(abs(p.d2v), abs(q.d2v));
      const Scalar slack = tol - (q.d2v - p.d2v);
      if (first || slack < third_worst) third_worst = slack;
      first = false;
    }
  }
  add_sign("sign: v > 0", w_v);
  add_sign("sign: v' < 0", w_dv);
  add_sign("sign: v'' > 0", w_d2v);
  add_sign("sign: v''' <= 0 (one-sided, tol h|v''|)", third_worst);
  add_sign("u < 0", w_upper);
  add_sign("u > ln r", w_lower);
  add_sign("u' > 0", w_du_pos);
  add_sign("u' < 1/r", w_du_inv);
  add_sign("u' < r/(2 eps^2)", w_du_quad);

  Scalar sup_u = 0, sup_du = 0, sup_d2u = 0;
  for (int k = 0; k <= n; ++k) {
    sup_u = std::max<Scalar>(sup_u, abs(sol.values[k]));
    sup_du = std::max<Scalar>(sup_du, abs(sol.d1[k]));
    sup_d2u = std::max<Scalar>(sup_d2u, abs(sol.d2[k]));
  }
  add_le("|u| <= 1/(2 eps)", sup_u, Scalar(1) / (Scalar(2) * e));
  add_le("|u'| <= 1/(2 eps)", sup_du, Scalar(1) / (Scalar(2) * e));
  add_le("|u''| <= 3/(2 eps^2)", sup_d2u, Scalar(3) / (Scalar(2) * e * e));

  add_le("int r^2 sinh v <= eps^2/2", sinh_moment(sol), e * e / Scalar(2));
  add_le("int r^2 sinh v <= eps^2/2 (trapezoid in r)", sinh_moment(sol, true),
         e * e / Scalar(2), true);

  const auto m14 = m_functions(sol, 0.25);
  add_le("M3(1/4) <= 2^8 eps^2", m14.m3, Scalar(256) * e * e);
  const auto m12 = m_functions(sol, 0.5);
  rep.checks.push_back({"M0(1/2) < M3(1/2)", to_double(m12.m3), to_double(m12.m0),
                        to_double(m12.m3 - m12.m0), m12.m0 < m12.m3, false});

  const auto ts = m_t_grid();
  std::vector<MReport<Scalar>> ms;
  for (double t : ts) ms.push_back(m_functions(sol, t));
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const auto& m = ms[i];
    const Scalar t = Scalar(ts[i]);
    const std::string at = "(t=" + std::to_string(ts[i]).substr(0, 6) + ")";
    add_le("M2 <= 1.05 [(2t/eps^2) M3 + M1/t] " + at, m.m2,
           Scalar(1.05) * (Scalar(2) * t / (e * e) * m.m3 + m.m1 / t));
    add_le("M1 <= (2/eps) M3 " + at, m.m1, Scalar(2) / e * m.m3);
    add_le("M1 < (2/t) M3 " + at, m.m1, Scalar(2) / t * m.m3, true);
    for (std::size_t j = i + 1; j < ts.size(); ++j) {
      const Scalar tp = Scalar(ts[j]);
      add_le("M3(t') <= 2/(t'-t) eps^2 M1(t) " + at + "(t'=" + std::to_string(ts[j]).substr(0, 6) +
                 ")",
             ms[j].m3, Scalar(2) / (tp - t) * e * e * m.m1);
    }
  }
  return rep;
}

extern template std::vector<ProfilePoint<Real>> v_profile<Real>(const RadialSolution<Real>&);
extern template MReport<Real> m_functions<Real>(const RadialSolution<Real>&, double);
extern template Real sinh_moment<Real>(const RadialSolution<Real>&, bool);
extern template InequalityReport verify_inequalities<Real>(const RadialSolution<Real>&);

}  // namespace hym
