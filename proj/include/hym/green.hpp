#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "hym/errors.hpp"
#include "hym/theta.hpp"

namespace hym {

struct DivisorPoint {
  double x = 0, y = 0;
  int coeff = 0;
};

/// Degree-zero divisor on C / (Z + iZ); positions are wrapped into [0, 1)^2.
class TorusDivisor {
 public:
  TorusDivisor() = default;
  explicit TorusDivisor(std::vector<DivisorPoint> points) : points_(std::move(points)) {
    if (points_.empty()) throw ValidationError("divisor: no points");
    int degree = 0;
    for (auto& p : points_) {
      if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw ValidationError("divisor: non-finite position");
      if (p.coeff == 0) throw ValidationError("divisor: zero coefficient");
      p.x -= std::floor(p.x);
      p.y -= std::floor(p.y);
      degree += p.coeff;
    }
    if (degree != 0)
      throw ValidationError("divisor: coefficients sum to " + std::to_string(degree) + ", need degree zero");
    for (std::size_t i = 0; i < points_.size(); ++i)
      for (std::size_t j = i + 1; j < points_.size(); ++j)
        if (points_[i].x == points_[j].x && points_[i].y == points_[j].y)
          throw ValidationError("divisor: points " + std::to_string(i) + " and " + std::to_string(j) +
                                " coincide");
  }

  const std::vector<DivisorPoint>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  const DivisorPoint& operator[](std::size_t i) const { return points_[i]; }

  /// Every point moved by (dx, dy).
  TorusDivisor translated(double dx, double dy) const {
    auto pts = points_;
    for (auto& p : pts) {
      p.x += dx;
      p.y += dy;
    }
    return TorusDivisor(pts);
  }

 private:
  std::vector<DivisorPoint> points_;
};

/// Representative of z in (-1/2, 1/2]^2.
template <typename Scalar>
std::complex<Scalar> reduce_to_cell(const std::complex<Scalar>& z) {
  using std::ceil;
  auto wrap = [](Scalar t) { return t - ceil(t - Scalar(0.5)); };
  return {wrap(z.real()), wrap(z.imag())};
}

/// G(z) = sum_a c_a [ -log|theta1(z - xi_a) / theta1'(0)| + pi Im(z - xi_a)^2 ].
/// Each bracket is doubly periodic with a mean independent of xi_a, so with
/// sum c_a = 0 the field has exactly zero mean over the torus.
template <typename Scalar = double>
class GreenField {
 public:
  using Complex = std::complex<Scalar>;
  using T = Theta<Scalar>;

  explicit GreenField(TorusDivisor divisor)
      : divisor_(std::move(divisor)), theta1p0_(T::theta1_prime0()) {
    for (const auto& p : divisor_.points()) centers_.emplace_back(Scalar(p.x), Scalar(p.y));
    // Midpoint-rule mean on a 64 x 64 grid; kept as a diagnostic only.
    constexpr int m = 64;
    Scalar sum = 0;
    int count = 0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        const Complex z((Scalar(i) + Scalar(0.5)) / m, (Scalar(j) + Scalar(0.5)) / m);
        if (at_point(z) >= 0) continue;
        sum += (*this)(z);
        ++count;
      }
    grid_mean_ = sum / Scalar(count);
  }

  const TorusDivisor& divisor() const { return divisor_; }
  Scalar theta1_prime0() const { return theta1p0_; }
  Scalar grid_mean() const { return grid_mean_; }

  Scalar operator()(const Complex& z) const {
    if (const int a = at_point(z); a >= 0) {
      const int c = divisor_[a].coeff;
      throw PoleError("green: evaluation at divisor point " + std::to_string(a) + " where G = " +
                          (c > 0 ? "+inf" : "-inf"),
                      a, c > 0 ? 1 : -1);
    }
    Scalar g = 0;
    for (std::size_t a = 0; a < centers_.size(); ++a) g += Scalar(divisor_[a].coeff) * bracket(z, a);
    return g;
  }

  /// g_a(z) = (G(z) + c_a log|z - xi_a|) / 2 on the chart |z - xi_a| < radius,
  /// with the singular term cancelled analytically.
  Scalar harmonic_part(std::size_t alpha, const Complex& z, Scalar chart_radius) const {
    using std::abs;
    using std::log;
    if (alpha >= centers_.size()) throw ValidationError("harmonic_part: chart index out of range");
    const Complex d = reduce_to_cell(Complex(z - centers_[alpha]));
    if (!(abs(d) < chart_radius))
      throw ValidationError("harmonic_part: point outside chart " + std::to_string(alpha));
    Scalar g = 0;
    for (std::size_t b = 0; b < centers_.size(); ++b) {
      if (b == alpha) continue;
      g += Scalar(divisor_[b].coeff) * bracket(z, b);
    }
    const Scalar reg = -log(abs(T::theta1_over_z(d)) / theta1p0_) + pi<Scalar>() * d.imag() * d.imag();
    g += Scalar(divisor_[alpha].coeff) * reg;
    return g / Scalar(2);
  }

 private:
  int at_point(const Complex& z) const {
    for (std::size_t a = 0; a < centers_.size(); ++a) {
      const Complex d = reduce_to_cell(Complex(z - centers_[a]));
      if (d.real() == Scalar(0) && d.imag() == Scalar(0)) return static_cast<int>(a);
    }
    return -1;
  }

  Scalar bracket(const Complex& z, std::size_t a) const {
    using std::abs;
    using std::log;
    const Complex d = reduce_to_cell(Complex(z - centers_[a]));
    return -log(abs(T::theta1(d)) / theta1p0_) + pi<Scalar>() * d.imag() * d.imag();
  }

  TorusDivisor divisor_;
  std::vector<Complex> centers_;
  Scalar theta1p0_;
  Scalar grid_mean_ = 0;
};

/// Five-point estimate (f(z+h) + f(z-h) + f(z+ih) + f(z-ih) - 4 f(z)) / h^2.
template <typename Scalar, typename F>
Scalar laplacian_probe(F&& f, const std::complex<Scalar>& z, Scalar h) {
  if (!(h > Scalar(0))) throw ValidationError("laplacian_probe: h must be positive");
  using C = std::complex<Scalar>;
  const Scalar s = f(C(z.real() + h, z.imag())) + f(C(z.real() - h, z.imag())) +
                   f(C(z.real(), z.imag() + h)) + f(C(z.real(), z.imag() - h));
  return (s - Scalar(4) * f(z)) / (h * h);
}

}  // namespace hym
