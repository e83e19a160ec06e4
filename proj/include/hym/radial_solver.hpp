#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "hym/banded.hpp"
#include "hym/errors.hpp"
#include "hym/precision.hpp"
#include "hym/radial_mesh.hpp"

namespace hym {

struct RadialSolverConfig {
  MeshConfig mesh;
  double tolerance = 1e-12;
  int max_iterations = 200;
};

/// Certified discrete solution of
///   u'' + u'/r = eps^-2 (e^u - r^2 e^-u),  u'(0) = 0,  u(1) = 0.
template <typename Scalar = Real>
struct RadialSolution {
  double epsilon = 0;
  RadialMesh<Scalar> mesh;
  VectorX<Scalar> values;
  VectorX<Scalar> d1;
  VectorX<Scalar> d2;
  /// s-derivatives of v = u - ln r (index 0 unused).
  VectorX<Scalar> vs;
  VectorX<Scalar> vss;
  Scalar residual_sup = 0;
  int iterations = 0;
  /// Every Newton iterate was pointwise <= its predecessor.
  bool monotone_descent = true;

  /// The inequality bounds assume eps < 1/8.
  bool outside_regime() const { return epsilon >= 0.125; }
};

namespace detail {

template <typename Scalar>
Scalar source(const Scalar& u, const Scalar& r, const Scalar& inv_eps2) {
  using std::exp;
  const Scalar e = exp(u);
  return inv_eps2 * (e - r * r / e);
}

template <typename Scalar>
Scalar source_du(const Scalar& u, const Scalar& r, const Scalar& inv_eps2) {
  using std::exp;
  const Scalar e = exp(u);
  return inv_eps2 * (e + r * r / e);
}

template <typename Scalar>
Scalar sup_abs(const VectorX<Scalar>& x) {
  using std::abs;
  Scalar m = 0;
  for (Eigen::Index i = 0; i < x.size(); ++i) m = std::max<Scalar>(m, abs(x[i]));
  return m;
}

}  // namespace detail

/// Pointwise residual: row 0 is the pole row 4u''(0)/2 - F(u0, 0), rows
/// 1..N-1 are u_ss/r^2 - F(u, r), row N is the Dirichlet defect u_N.
template <typename Scalar>
VectorX<Scalar> residual_radial(const VectorX<Scalar>& values, const RadialMesh<Scalar>& mesh,
                                double epsilon) {
  if (values.size() != mesh.size())
    throw ValidationError("residual_radial: value count does not match mesh");
  if (!(epsilon > 0)) throw ValidationError("residual_radial: epsilon must be positive");
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    if (!is_finite(values[k]))
      throw ValidationError("residual_radial: non-finite value at index " + std::to_string(k));
  }
  const RadialStencils<Scalar> st(mesh);
  const Scalar inv_eps2 = Scalar(1) / (Scalar(epsilon) * Scalar(epsilon));
  const int n = mesh.n();
  VectorX<Scalar> res(mesh.size());
  res[0] = Scalar(4) * st.pole_beta(values) - detail::source(values[0], Scalar(0), inv_eps2);
  for (int k = 1; k < n; ++k) {
    const Scalar r = mesh.r(k);
    res[k] = st.ds(values, k)[1] / (r * r) - detail::source(values[k], r, inv_eps2);
  }
  res[n] = values[n];
  return res;
}

/// Derivatives d/dr and d^2/dr^2 of u at every node, reconstructed on
/// v = u - ln r with the solver's stencils.
template <typename Scalar>
void reconstruct_derivatives(RadialSolution<Scalar>& sol) {
  const auto& mesh = sol.mesh;
  const RadialStencils<Scalar> st(mesh);
  const int n = mesh.n();
  const Scalar beta = st.pole_beta(sol.values);
  // v extended with two ghost slots in front: index j + 1 for s-index j >= -1.
  VectorX<Scalar> v(mesh.size());
  v[0] = Scalar(0);  // unused, the pole has no s coordinate
  for (int k = 1; k <= n; ++k) v[k] = sol.values[k] - mesh.s(k);
  sol.d1.resize(mesh.size());
  sol.d2.resize(mesh.size());
  sol.vs = VectorX<Scalar>::Zero(mesh.size());
  sol.vss = VectorX<Scalar>::Zero(mesh.size());
  sol.d1[0] = Scalar(0);
  sol.d2[0] = Scalar(2) * beta;
  const Scalar h = mesh.h();
  for (int k = 1; k <= n; ++k) {
    Scalar vs, vss;
    if (k <= 2) {
      auto at = [&](int j) {
        return j >= 1 ? v[j] : st.at(sol.values, j) - (mesh.s(1) + Scalar(j - 1) * h);
      };
      const Scalar vm2 = at(k - 2), vm1 = at(k - 1), v0 = v[k], vp1 = v[k + 1], vp2 = v[k + 2];
      vs = (vm2 - Scalar(8) * vm1 + Scalar(8) * vp1 - vp2) / (Scalar(12) * h);
      vss = (-vm2 + Scalar(16) * vm1 - Scalar(30) * v0 + Scalar(16) * vp1 - vp2) /
            (Scalar(12) * h * h);
    } else {
      const auto d = st.ds(v, k);
      vs = d[0];
      vss = d[1];
    }
    const Scalar r = mesh.r(k);
    sol.vs[k] = vs;
    sol.vss[k] = vss;
    sol.d1[k] = (vs + Scalar(1)) / r;
    sol.d2[k] = (vss - vs - Scalar(1)) / (r * r);
  }
}

/// Damped Newton from the supersolution u = 0, iterated to the round-off
/// floor, then certified against cfg.tolerance.
template <typename Scalar = Real>
RadialSolution<Scalar> solve_radial(double epsilon, const RadialSolverConfig& cfg = {}) {
  using std::abs;
  if (!(epsilon > 0 && epsilon < 0.5))
    throw ValidationError("solve_radial: epsilon must lie in (0, 1/2)");
  RadialSolution<Scalar> sol{epsilon, RadialMesh<Scalar>::for_epsilon(cfg.mesh, epsilon)};
  const auto& mesh = sol.mesh;
  if (to_double(mesh.h()) > epsilon / 4) {
    throw ResolutionError("solve_radial: log-step " + std::to_string(to_double(mesh.h())) +
                          " exceeds eps/4 = " + std::to_string(epsilon / 4) +
                          "; increase nodes");
  }
  const RadialStencils<Scalar> st(mesh);
  const int n = mesh.n();
  const Scalar inv_eps2 = Scalar(1) / (Scalar(epsilon) * Scalar(epsilon));

  VectorX<Scalar> u = VectorX<Scalar>::Zero(mesh.size());
  VectorX<Scalar> res = residual_radial(u, mesh, epsilon);
  Scalar norm = detail::sup_abs(res);
  Scalar best = norm;
  int stagnant = 0;
  BandedMatrix<Scalar> jac(mesh.size(), 4, 3);
  for (int it = 0; it < cfg.max_iterations; ++it) {
    jac.set_zero();
    for (int m = 0; m < RadialStencils<Scalar>::kPoleNodes; ++m)
      jac(0, m) += Scalar(4) * st.beta_weights()[m];
    jac(0, 0) -= detail::source_du(u[0], Scalar(0), inv_eps2);
    for (int k = 1; k < n; ++k) {
      const Scalar r2 = mesh.r(k) * mesh.r(k);
      for (const auto& [j, w] : st.d2_row(k)) jac(k, j) += w / r2;
      jac(k, k) -= detail::source_du(u[k], mesh.r(k), inv_eps2);
    }
    jac(n, n) = Scalar(1);
    VectorX<Scalar> delta = -res;
    jac.solve_in_place(delta);

    Scalar lambda = 1;
    VectorX<Scalar> trial;
    VectorX<Scalar> trial_res;
    Scalar trial_norm;
    for (;;) {
      trial = u + lambda * delta;
      trial_res = residual_radial(trial, mesh, epsilon);
      trial_norm = detail::sup_abs(trial_res);
      if (trial_norm <= (Scalar(1) - Scalar(1e-4) * lambda) * norm || norm < Scalar(1e-20)) break;
      lambda /= 2;
      if (lambda < Scalar(1e-12)) {
        throw NonConvergenceError("solve_radial: line search failed", to_double(norm));
      }
    }
    for (int k = 0; k <= n; ++k) {
      if (trial[k] > u[k] + Scalar(1e-24)) sol.monotone_descent = false;
    }
    u = trial;
    res = trial_res;
    norm = trial_norm;
    sol.iterations = it + 1;
    const Scalar step = detail::sup_abs(VectorX<Scalar>(lambda * delta));
    if (norm < best * Scalar(0.5)) {
      best = norm;
      stagnant = 0;
    } else if (++stagnant >= 3) {
      break;
    }
    if (step < Scalar(1e-28)) break;
  }
  sol.values = u;
  sol.values[n] = Scalar(0);
  sol.residual_sup = detail::sup_abs(residual_radial(sol.values, mesh, epsilon));
  if (!(sol.residual_sup < Scalar(cfg.tolerance))) {
    throw NonConvergenceError("solve_radial: residual above tolerance",
                              to_double(sol.residual_sup));
  }
  reconstruct_derivatives(sol);
  return sol;
}

extern template VectorX<Real> residual_radial<Real>(const VectorX<Real>&, const RadialMesh<Real>&,
                                                    double);
extern template void reconstruct_derivatives<Real>(RadialSolution<Real>&);
extern template RadialSolution<Real> solve_radial<Real>(double, const RadialSolverConfig&);

}  // namespace hym
