#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "hym/fornberg.hpp"
#include "hym/precision.hpp"

namespace hym {

/// Grading knobs for the radial mesh. Nodes are r = 0 followed by `nodes`
/// points uniform in s = ln r on [ln r_min, 0]; r_min = eps^inner_exponent,
/// so the default exponent 2 puts half of the log-spaced nodes in [0, eps].
struct MeshConfig {
  int nodes = 4096;
  double inner_exponent = 2.0;
  /// N = max(nodes, ceil(nodes_per_inverse_eps / eps)) when positive.
  double nodes_per_inverse_eps = 0.0;
};

inline int resolved_node_count(const MeshConfig& cfg, double epsilon) {
  int n = cfg.nodes;
  if (cfg.nodes_per_inverse_eps > 0.0) {
    n = std::max(n, static_cast<int>(std::ceil(cfg.nodes_per_inverse_eps / epsilon)));
  }
  return n;
}

/// Radial mesh on [0, 1]: index 0 is the pole, indices 1..N are uniform in
/// s = ln r with s_N = 0.
template <typename Scalar>
class RadialMesh {
 public:
  RadialMesh(int n, const Scalar& r_min) : n_(n), r_(n + 1), s_(n + 1) {
    using std::log;
    using std::exp;
    if (n < 64) throw std::invalid_argument("RadialMesh: need N >= 64");
    if (!(r_min > Scalar(0) && r_min < Scalar(1)))
      throw std::invalid_argument("RadialMesh: r_min must lie in (0,1)");
    const Scalar s_min = log(r_min);
    h_ = -s_min / Scalar(n - 1);
    r_[0] = Scalar(0);
    s_[0] = s_min - h_;  // placeholder, the pole has no s coordinate
    for (int k = 1; k <= n; ++k) {
      s_[k] = s_min + Scalar(k - 1) * h_;
      r_[k] = exp(s_[k]);
    }
    s_[n] = Scalar(0);
    r_[n] = Scalar(1);
    r_[1] = r_min;
  }

  static RadialMesh for_epsilon(const MeshConfig& cfg, double epsilon) {
    using std::pow;
    return RadialMesh(resolved_node_count(cfg, epsilon),
                      Scalar(pow(epsilon, cfg.inner_exponent)));
  }

  /// Index of the last node (r = 1).
  int n() const { return n_; }
  /// Number of nodes including the pole.
  int size() const { return n_ + 1; }
  const Scalar& h() const { return h_; }
  const Scalar& r(int k) const { return r_[k]; }
  const Scalar& s(int k) const { return s_[k]; }
  const Scalar& r_min() const { return r_[1]; }
  const std::vector<Scalar>& nodes() const { return r_; }

  /// Largest physical spacing (attained next to r = 1).
  Scalar max_spacing() const { return r_[n_] - r_[n_ - 1]; }

  /// Fraction of nodes with r <= x.
  double fraction_below(double x) const {
    int c = 0;
    for (const auto& v : r_) c += (to_double(v) <= x);
    return static_cast<double>(c) / static_cast<double>(size());
  }

 private:
  int n_;
  Scalar h_;
  std::vector<Scalar> r_;
  std::vector<Scalar> s_;
};

/// Stencils on a RadialMesh: 4th-order central differences in s, ghost
/// values below r_min from the even interpolant in r^2 through nodes 0..3,
/// and one-sided closures at r = 1. All stencils are exact on affine
/// functions of s, so ln r is annihilated by the second-difference operator.
template <typename Scalar>
class RadialStencils {
 public:
  static constexpr int kPoleNodes = 4;

  explicit RadialStencils(const RadialMesh<Scalar>& mesh) : mesh_(mesh) {
    const int n = mesh.n();
    // Ghost positions s_1 - h and s_1 - 2h, interpolated in rho = r^2.
    std::vector<Scalar> rho(kPoleNodes);
    for (int m = 0; m < kPoleNodes; ++m) rho[m] = mesh.r(m) * mesh.r(m);
    for (int g = 0; g < 2; ++g) {
      using std::exp;
      const Scalar rg = exp(mesh.s(1) - Scalar(g + 1) * mesh.h());
      const auto w = fornberg_weights<Scalar>(rg * rg, rho, 1);
      for (int m = 0; m < kPoleNodes; ++m) ghost_[g][m] = w[0][m];
    }
    const auto w0 = fornberg_weights<Scalar>(Scalar(0), rho, 1);
    for (int m = 0; m < kPoleNodes; ++m) beta_[m] = w0[1][m];

    // Closures in s at k = n-1 and k = n (unit spacing, rescaled below).
    std::vector<Scalar> off(6);
    for (int m = 0; m < 6; ++m) off[m] = Scalar(m - 4);  // nodes n-5..n around n-1
    const auto wa = fornberg_weights<Scalar>(Scalar(0), off, 2);
    for (int m = 0; m < 6; ++m) {
      near_end_d1_[m] = wa[1][m];
      near_end_d2_[m] = wa[2][m];
    }
    std::vector<Scalar> end(6);
    for (int m = 0; m < 6; ++m) end[m] = Scalar(m - 5);  // nodes n-5..n around n
    const auto wb = fornberg_weights<Scalar>(Scalar(0), end, 2);
    for (int m = 0; m < 6; ++m) {
      end_d1_[m] = wb[1][m];
      end_d2_[m] = wb[2][m];
    }
    (void)n;
  }

  const RadialMesh<Scalar>& mesh() const { return mesh_; }

  /// Value at s-index j (j >= 1 real node, j = 0 / -1 ghosts).
  template <typename Vec>
  Scalar at(const Vec& u, int j) const {
    if (j >= 1) return u[j];
    const auto& g = ghost_[-j];
    Scalar v = 0;
    for (int m = 0; m < kPoleNodes; ++m) v += g[m] * u[m];
    return v;
  }

  /// Coefficient beta of r^2 in the even interpolant, i.e. u''(0)/2.
  template <typename Vec>
  Scalar pole_beta(const Vec& u) const {
    Scalar b = 0;
    for (int m = 0; m < kPoleNodes; ++m) b += beta_[m] * u[m];
    return b;
  }

  /// (d/ds, d^2/ds^2) at node k in 1..N.
  template <typename Vec>
  std::array<Scalar, 2> ds(const Vec& u, int k) const {
    const int n = mesh_.n();
    const Scalar h = mesh_.h();
    if (k <= n - 2) {
      const Scalar um2 = at(u, k - 2), um1 = at(u, k - 1), u0 = u[k], up1 = u[k + 1],
                   up2 = u[k + 2];
      const Scalar d1 = (um2 - Scalar(8) * um1 + Scalar(8) * up1 - up2) / (Scalar(12) * h);
      const Scalar d2 = (-um2 + Scalar(16) * um1 - Scalar(30) * u0 + Scalar(16) * up1 - up2) /
                        (Scalar(12) * h * h);
      return {d1, d2};
    }
    const auto& w1 = (k == n - 1) ? near_end_d1_ : end_d1_;
    const auto& w2 = (k == n - 1) ? near_end_d2_ : end_d2_;
    Scalar d1 = 0, d2 = 0;
    for (int m = 0; m < 6; ++m) {
      d1 += w1[m] * u[n - 5 + m];
      d2 += w2[m] * u[n - 5 + m];
    }
    return {d1 / h, d2 / (h * h)};
  }

  /// Nonzero pattern of d^2/ds^2 at row k: (column, weight / h^2) pairs,
  /// ghosts already expanded onto nodes 0..3.
  std::vector<std::pair<int, Scalar>> d2_row(int k) const {
    const int n = mesh_.n();
    const Scalar h2 = mesh_.h() * mesh_.h();
    std::vector<std::pair<int, Scalar>> row;
    auto add = [&](int j, const Scalar& w) {
      if (j >= 1) {
        row.emplace_back(j, w / h2);
      } else {
        for (int m = 0; m < kPoleNodes; ++m) row.emplace_back(m, w * ghost_[-j][m] / h2);
      }
    };
    if (k <= n - 2) {
      const Scalar c[5] = {Scalar(-1) / 12, Scalar(16) / 12, Scalar(-30) / 12, Scalar(16) / 12,
                           Scalar(-1) / 12};
      for (int m = 0; m < 5; ++m) add(k - 2 + m, c[m]);
    } else {
      const auto& w2 = (k == n - 1) ? near_end_d2_ : end_d2_;
      for (int m = 0; m < 6; ++m) add(n - 5 + m, w2[m]);
    }
    return row;
  }

  const std::array<Scalar, kPoleNodes>& beta_weights() const { return beta_; }

 private:
  const RadialMesh<Scalar>& mesh_;
  std::array<std::array<Scalar, kPoleNodes>, 2> ghost_{};
  std::array<Scalar, kPoleNodes> beta_{};
  std::array<Scalar, 6> near_end_d1_{}, near_end_d2_{}, end_d1_{}, end_d2_{};
};

}  // namespace hym
