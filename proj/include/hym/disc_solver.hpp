#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "hym/errors.hpp"
#include "hym/precision.hpp"
#include "hym/radial_mesh.hpp"

namespace hym {

struct DiscConfig {
  int radial_nodes = 384;
  int angular_nodes = 32;
  double inner_exponent = 2.0;
  double tolerance = 1e-10;
  int max_iterations = 100;
};

/// Polar-grid solution of Lap u = eps^-2 (e^u - r^2 e^-u) on the unit disc
/// with u = 0 on the boundary. Radii follow the s = ln r mesh of the radial
/// solver; the pole is a single unknown.
template <typename Scalar = long double>
struct DiscSolution {
  double epsilon = 0;
  int nr = 0;       ///< index of the boundary ring
  int ntheta = 0;
  std::vector<Scalar> radii;  ///< radii[k], k = 0..nr, radii[0] = 0
  Scalar pole = 0;
  /// values(k - 1, j) at radius radii[k] and angle 2 pi j / ntheta.
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> values;
  /// Sup of the r^2-scaled residual u_ss + u_tt - r^2 F (pole row unscaled).
  Scalar residual_sup = 0;
  /// max over rings of (max_theta u - min_theta u).
  Scalar angular_variation = 0;
  int iterations = 0;
  bool monotone_descent = true;

  Scalar at(int k, int j) const { return k == 0 ? pole : values(k - 1, j); }
};

namespace detail {

template <typename Scalar>
class DiscSystem {
 public:
  DiscSystem(const RadialMesh<Scalar>& mesh, int ntheta, double eps)
      : mesh_(mesh), st_(mesh), nt_(ntheta), nr_(mesh.n()),
        inv_eps2_(Scalar(1) / (Scalar(eps) * Scalar(eps))) {
    const Scalar dt = Scalar(2) * pi<Scalar>() / Scalar(ntheta);
    inv_dt2_ = Scalar(1) / (Scalar(12) * dt * dt);
    for (int k = 1; k < nr_; ++k) rows_.push_back(st_.d2_row(k));
  }

  int size() const { return 1 + nr_ * nt_; }
  int idx(int k, int j) const {
    if (k == 0) return 0;
    j = ((j % nt_) + nt_) % nt_;
    return 1 + (k - 1) * nt_ + j;
  }

  VectorX<Scalar> residual(const VectorX<Scalar>& u) const {
    using std::exp;
    VectorX<Scalar> res(size());
    Scalar beta = 0;
    for (int j = 0; j < nt_; ++j)
      for (int m = 0; m < 4; ++m) beta += st_.beta_weights()[m] * u[idx(m, j)];
    beta /= Scalar(nt_);
    res[0] = Scalar(4) * beta - inv_eps2_ * exp(u[0]);
    for (int k = 1; k < nr_; ++k) {
      const Scalar r = mesh_.r(k);
      for (int j = 0; j < nt_; ++j) {
        Scalar acc = 0;
        for (const auto& [col, w] : rows_[k - 1]) acc += w * u[idx(col, j)];
        acc += inv_dt2_ * (-u[idx(k, j - 2)] + Scalar(16) * u[idx(k, j - 1)] -
                           Scalar(30) * u[idx(k, j)] + Scalar(16) * u[idx(k, j + 1)] -
                           u[idx(k, j + 2)]);
        const Scalar e = exp(u[idx(k, j)]);
        res[idx(k, j)] = acc - r * r * inv_eps2_ * (e - r * r / e);
      }
    }
    for (int j = 0; j < nt_; ++j) res[idx(nr_, j)] = u[idx(nr_, j)];
    return res;
  }

  Eigen::SparseMatrix<Scalar> jacobian(const VectorX<Scalar>& u) const {
    using std::exp;
    std::vector<Eigen::Triplet<Scalar>> trip;
    for (int j = 0; j < nt_; ++j)
      for (int m = 0; m < 4; ++m)
        trip.emplace_back(0, idx(m, j), Scalar(4) * st_.beta_weights()[m] / Scalar(nt_));
    trip.emplace_back(0, 0, -inv_eps2_ * exp(u[0]));
    const Scalar c[5] = {-1, 16, -30, 16, -1};
    for (int k = 1; k < nr_; ++k) {
      const Scalar r = mesh_.r(k);
      for (int j = 0; j < nt_; ++j) {
        const int row = idx(k, j);
        for (const auto& [col, w] : rows_[k - 1]) trip.emplace_back(row, idx(col, j), w);
        for (int q = 0; q < 5; ++q) trip.emplace_back(row, idx(k, j + q - 2), c[q] * inv_dt2_);
        const Scalar e = exp(u[row]);
        trip.emplace_back(row, row, -r * r * inv_eps2_ * (e + r * r / e));
      }
    }
    for (int j = 0; j < nt_; ++j) trip.emplace_back(idx(nr_, j), idx(nr_, j), Scalar(1));
    Eigen::SparseMatrix<Scalar> J(size(), size());
    J.setFromTriplets(trip.begin(), trip.end());
    return J;
  }

 private:
  const RadialMesh<Scalar>& mesh_;
  RadialStencils<Scalar> st_;
  int nt_, nr_;
  Scalar inv_eps2_, inv_dt2_;
  std::vector<std::vector<std::pair<int, Scalar>>> rows_;
};

}  // namespace detail

template <typename Scalar = long double>
DiscSolution<Scalar> solve_disc(double epsilon, const DiscConfig& cfg = {}) {
  using std::abs;
  using std::pow;
  if (!(epsilon > 0 && epsilon < 0.5)) throw ValidationError("solve_disc: epsilon must lie in (0, 1/2)");
  if (cfg.angular_nodes < 32) throw ValidationError("solve_disc: need at least 32 angular nodes");
  const RadialMesh<Scalar> mesh(cfg.radial_nodes, Scalar(pow(epsilon, cfg.inner_exponent)));
  if (to_double(mesh.h()) > epsilon / 4) {
    throw ResolutionError("solve_disc: log-step " + std::to_string(to_double(mesh.h())) +
                          " exceeds eps/4; increase radial nodes");
  }
  const detail::DiscSystem<Scalar> sys(mesh, cfg.angular_nodes, epsilon);
  DiscSolution<Scalar> sol;
  sol.epsilon = epsilon;
  sol.nr = mesh.n();
  sol.ntheta = cfg.angular_nodes;
  sol.radii = mesh.nodes();

  auto sup = [](const VectorX<Scalar>& x) { return x.cwiseAbs().maxCoeff(); };
  VectorX<Scalar> u = VectorX<Scalar>::Zero(sys.size());
  VectorX<Scalar> res = sys.residual(u);
  Scalar norm = sup(res);
  Eigen::SparseLU<Eigen::SparseMatrix<Scalar>> lu;
  bool analyzed = false;
  for (int it = 0; it < cfg.max_iterations; ++it) {
    const auto J = sys.jacobian(u);
    if (!analyzed) {
      lu.analyzePattern(J);
      analyzed = true;
    }
    lu.factorize(J);
    if (lu.info() != Eigen::Success) throw SolverError("solve_disc: singular Jacobian");
    const VectorX<Scalar> delta = lu.solve(VectorX<Scalar>(-res));
    Scalar lambda = 1;
    VectorX<Scalar> trial, trial_res;
    Scalar trial_norm;
    bool stalled = false;
    for (;;) {
      trial = u + lambda * delta;
      for (int j = 0; j < sol.ntheta; ++j) trial[sys.idx(sol.nr, j)] = Scalar(0);
      trial_res = sys.residual(trial);
      trial_norm = sup(trial_res);
      if (trial_norm <= (Scalar(1) - Scalar(1e-4) * lambda) * norm) break;
      lambda /= 2;
      if (lambda < Scalar(1e-12)) {
        stalled = true;
        break;
      }
    }
    // At the round-off floor no step decreases the residual any further.
    if (stalled) break;
    for (Eigen::Index i = 0; i < u.size(); ++i)
      if (trial[i] > u[i] + Scalar(1e-12)) sol.monotone_descent = false;
    const Scalar step = sup(VectorX<Scalar>(lambda * delta));
    u = trial;
    res = trial_res;
    norm = trial_norm;
    sol.iterations = it + 1;
    if (step < Scalar(1e-17)) break;
  }
  sol.residual_sup = norm;
  if (!(norm < Scalar(cfg.tolerance)))
    throw NonConvergenceError("solve_disc: residual above tolerance", to_double(norm));

  sol.pole = u[0];
  sol.values.resize(sol.nr, sol.ntheta);
  for (int k = 1; k <= sol.nr; ++k)
    for (int j = 0; j < sol.ntheta; ++j) sol.values(k - 1, j) = u[sys.idx(k, j)];
  for (int k = 1; k <= sol.nr; ++k) {
    const auto row = sol.values.row(k - 1);
    sol.angular_variation = std::max<Scalar>(sol.angular_variation, row.maxCoeff() - row.minCoeff());
  }
  return sol;
}

/// max over the theta = 0 slice (pole included) of |disc - radial(r)|.
template <typename Scalar, typename F>
double slice_deviation(const DiscSolution<Scalar>& disc, F&& radial) {
  double dev = std::abs(to_double(disc.pole) - radial(0.0));
  for (int k = 1; k <= disc.nr; ++k) {
    const double r = to_double(disc.radii[k]);
    dev = std::max(dev, std::abs(to_double(disc.at(k, 0)) - radial(r)));
  }
  return dev;
}

extern template DiscSolution<long double> solve_disc<long double>(double, const DiscConfig&);

}  // namespace hym
