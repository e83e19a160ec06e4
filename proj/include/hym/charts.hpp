#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hym/errors.hpp"
#include "hym/green.hpp"
#include "hym/precision.hpp"

namespace hym {

template <typename Scalar = double>
using Matrix2c = Eigen::Matrix<std::complex<Scalar>, 2, 2>;

/// Chart atlas data over the base torus B: n branch points (coefficient +1
/// in the divisor) and n/4 divisor points (coefficient -4), chart radius r0,
/// degree d of the polynomial defining the spectral curve.
struct GeometryConfig {
  int n = 4;
  int d = 1;
  double r0 = 0.05;
  std::vector<std::complex<double>> branch_points{{0.2, 0.2}, {0.7, 0.25}, {0.25, 0.7}, {0.7, 0.7}};
  std::vector<std::complex<double>> divisor_points{{0.45, 0.45}};
  /// Constant spectral sections (w1*, -w1*) on generic and divisor charts.
  std::complex<double> section{0.25, 0.1};

  int point_count() const { return static_cast<int>(branch_points.size() + divisor_points.size()); }
  std::complex<double> center(int alpha) const {
    return alpha < n ? branch_points[alpha] : divisor_points[alpha - n];
  }
  int coefficient(int alpha) const { return alpha < n ? 1 : -4; }
  bool is_branch(int alpha) const { return alpha < n; }
  double chart_radius() const { return 2 * r0; }

  /// Throws ValidationError naming the first violated invariant.
  void validate() const {
    if (n <= 0 || n % 4 != 0) throw ValidationError("geometry: n = " + std::to_string(n) + " must be a positive multiple of 4");
    if (d < 1) throw ValidationError("geometry: d must be >= 1");
    if (!(r0 > 0)) throw ValidationError("geometry: r0 must be positive");
    if (static_cast<int>(branch_points.size()) != n)
      throw ValidationError("geometry: expected " + std::to_string(n) + " branch points");
    if (static_cast<int>(divisor_points.size()) != n / 4)
      throw ValidationError("geometry: expected " + std::to_string(n / 4) + " divisor points");
    for (int a = 0; a < point_count(); ++a) {
      const auto c = center(a);
      if (!(c.real() >= 0 && c.real() < 1 && c.imag() >= 0 && c.imag() < 1))
        throw ValidationError("geometry: point " + std::to_string(a) + " outside [0,1)^2");
    }
    for (int a = 0; a < point_count(); ++a)
      for (int b = a + 1; b < point_count(); ++b) {
        const double dist = std::abs(reduce_to_cell(center(a) - center(b)));
        if (!(dist > 2 * chart_radius()))
          throw ValidationError("geometry: chart discs of radius 2 r0 around points " + std::to_string(a) +
                                " and " + std::to_string(b) + " overlap (distance " +
                                std::to_string(dist) + ")");
      }
  }

  /// D~ = sum xi_a - 4 sum xi_j.
  TorusDivisor divisor() const {
    std::vector<DivisorPoint> pts;
    for (int a = 0; a < point_count(); ++a) pts.push_back({center(a).real(), center(a).imag(), coefficient(a)});
    return TorusDivisor(pts);
  }
};

enum class ChartKind { Generic, Branch, Divisor };

/// A chart with its spectral sections. Branch charts use the two-valued
/// +-sqrt(z_a); other charts carry holomorphic section evaluators.
template <typename Scalar = double>
struct Chart {
  using Complex = std::complex<Scalar>;
  ChartKind kind = ChartKind::Generic;
  int index = -1;  ///< position in the divisor list, -1 for the generic chart
  Complex center{};
  std::function<Complex(const Complex&)> w1, w2;

  static Chart generic(Complex section) {
    return {ChartKind::Generic, -1, {}, [section](const Complex&) { return section; },
            [section](const Complex&) { return -section; }};
  }
  static Chart divisor(int index, Complex center, Complex section) {
    auto c = generic(section);
    c.kind = ChartKind::Divisor;
    c.index = index;
    c.center = center;
    return c;
  }
  static Chart branch(int index, Complex center) {
    return {ChartKind::Branch, index, center, nullptr, nullptr};
  }
};

template <typename Scalar = double>
std::vector<Chart<Scalar>> build_atlas(const GeometryConfig& g) {
  using Complex = std::complex<Scalar>;
  g.validate();
  std::vector<Chart<Scalar>> atlas;
  const Complex section(Scalar(g.section.real()), Scalar(g.section.imag()));
  atlas.push_back(Chart<Scalar>::generic(section));
  for (int a = 0; a < g.point_count(); ++a) {
    const Complex c(Scalar(g.center(a).real()), Scalar(g.center(a).imag()));
    atlas.push_back(g.is_branch(a) ? Chart<Scalar>::branch(a, c) : Chart<Scalar>::divisor(a, c, section));
  }
  return atlas;
}

namespace detail {

/// sinh(x) / x, entire, with a Taylor branch near 0.
template <typename Complex>
Complex sinhc(const Complex& x) {
  using std::abs;
  using R = typename Complex::value_type;
  if (abs(x) > R(1e-3)) return std::sinh(x) / x;
  const Complex x2 = x * x;
  return R(1) + x2 / R(6) * (R(1) + x2 / R(20) * (R(1) + x2 / R(42)));
}

}  // namespace detail

/// Branch-chart transition [[cosh a, s sinh a], [sinh a / s, cosh a]] with
/// a = pi i s conj(w) and s a square root of the local coordinate z. The
/// entries are even in s, so either root gives the same matrix.
template <typename Scalar>
Matrix2c<Scalar> branch_transition(const std::complex<Scalar>& s, const std::complex<Scalar>& w) {
  using Complex = std::complex<Scalar>;
  const Complex piw = Complex(0, pi<Scalar>()) * std::conj(w);
  const Complex a = s * piw;
  const Complex sh_over_s = piw * detail::sinhc(a);  // sinh(a) / s
  Matrix2c<Scalar> m;
  m << std::cosh(a), s * s * sh_over_s, sh_over_s, std::cosh(a);
  return m;
}

/// Smooth-to-holomorphic frame transition on a chart at local coordinate z.
template <typename Scalar>
Matrix2c<Scalar> transition_smooth_to_holo(const Chart<Scalar>& chart, const std::complex<Scalar>& z,
                                           const std::complex<Scalar>& w) {
  using Complex = std::complex<Scalar>;
  if (chart.kind == ChartKind::Branch) return branch_transition(std::sqrt(z), w);
  const Complex i_pi(0, pi<Scalar>());
  Matrix2c<Scalar> m = Matrix2c<Scalar>::Zero();
  m(0, 0) = std::exp(i_pi * chart.w1(z) * std::conj(w));
  m(1, 1) = std::exp(i_pi * chart.w2(z) * std::conj(w));
  return m;
}

/// C(z) = (1/sqrt 2) [[1, s], [1, -s]] with s = sqrt(z).
template <typename Scalar>
Matrix2c<Scalar> frame_change(const std::complex<Scalar>& s) {
  const Scalar k = Scalar(1) / std::sqrt(Scalar(2));
  Matrix2c<Scalar> c;
  c << k, k * s, k, -k * s;
  return c;
}

/// max entrywise |A_a - C^-1 diag(e^{pi i s conj w}, e^{-pi i s conj w}) C|.
template <typename Scalar>
Scalar conjugation_identity_error(const std::complex<Scalar>& z, const std::complex<Scalar>& w,
                                  bool swap_branch = false) {
  using Complex = std::complex<Scalar>;
  if (z == Complex(0)) throw ValidationError("conjugation identity: C(z) is singular at the branch point");
  Complex s = std::sqrt(z);
  if (swap_branch) s = -s;
  const Complex a = Complex(0, pi<Scalar>()) * s * std::conj(w);
  Matrix2c<Scalar> diag = Matrix2c<Scalar>::Zero();
  diag(0, 0) = std::exp(a);
  diag(1, 1) = std::exp(-a);
  const Matrix2c<Scalar> C = frame_change(s);
  const Matrix2c<Scalar> rhs = C.inverse() * diag * C;
  return (branch_transition(s, w) - rhs).cwiseAbs().maxCoeff();
}

/// Coefficients of the Poincare-bundle curvature in the basis
/// dw*^dw, dw*^dwbar, dwbar*^dw, dwbar*^dwbar, dw*^dwbar*, dw^dwbar.
struct PoincareCurvature {
  std::complex<double> ws_w{0, 0};
  std::complex<double> ws_wbar{0, 0};
  std::complex<double> wsbar_w{0, 0};
  std::complex<double> wsbar_wbar{0, 0};
  std::complex<double> ws_wsbar{0, 0};
  std::complex<double> w_wbar{0, 0};
  /// c1 = Theta / (2 pi i) coefficient of dw*^dwbar + dwbar*^dw.
  double c1 = 0;
};

/// Theta = -pi i (dw*^dwbar + dwbar*^dw).
inline PoincareCurvature poincare_curvature() {
  PoincareCurvature p;
  const std::complex<double> c(0, -pi<double>());
  p.ws_wbar = c;
  p.wsbar_w = c;
  p.c1 = (c / std::complex<double>(0, 2 * pi<double>())).real();
  return p;
}

/// Connection form theta = -pi i (w* dwbar + wbar* dw), components on
/// (dw*, dwbar*, dw, dwbar) as functions of independent (w*, wbar*, w, wbar).
inline std::array<std::complex<double>, 4> poincare_connection(const std::array<std::complex<double>, 4>& x) {
  const std::complex<double> c(0, -pi<double>());
  return {0.0, 0.0, c * x[1], c * x[0]};
}

/// Exterior derivative of poincare_connection by central differences:
/// F[i][j] = d_i a_j - d_j a_i.
inline std::array<std::array<std::complex<double>, 4>, 4> poincare_curvature_fd(
    const std::array<std::complex<double>, 4>& x, double h) {
  std::array<std::array<std::complex<double>, 4>, 4> d{};  // d[i][j] = d_i a_j
  for (int i = 0; i < 4; ++i) {
    auto xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    const auto ap = poincare_connection(xp), am = poincare_connection(xm);
    for (int j = 0; j < 4; ++j) d[i][j] = (ap[j] - am[j]) / (2 * h);
  }
  std::array<std::array<std::complex<double>, 4>, 4> F{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) F[i][j] = d[i][j] - d[j][i];
  return F;
}

struct Numerology {
  int genus = 0;
  int deg_half_canonical = 0;
  int deg_divisor_pullback = 0;
  int c2 = 0;
};

/// Riemann-Hurwitz for the 2:1 cover branched at n points of an elliptic
/// curve, degrees of the twisting line bundles, and c2 = deg(q) = 2d.
inline Numerology numerology(int n, int d) {
  if (n <= 0 || n % 4 != 0) throw ValidationError("numerology: n must be a positive multiple of 4");
  if (d < 1) throw ValidationError("numerology: d must be >= 1");
  return {n / 2 + 1, n / 2, 2 * (n / 4), 2 * d};
}

}  // namespace hym
