#pragma once

#include <cmath>
#include <complex>
#include <limits>

#include "hym/precision.hpp"

namespace hym {

/// Jacobi theta functions for the square lattice (tau = i, q = e^{-pi}) in
/// the period-1 convention theta1(z + 1) = -theta1(z).
template <typename Scalar = double>
struct Theta {
  using Complex = std::complex<Scalar>;

  static Scalar q() {
    using std::exp;
    return exp(-pi<Scalar>());
  }
  static Scalar tol() {
    return std::min<Scalar>(Scalar(1e-16), std::numeric_limits<Scalar>::epsilon() / 8);
  }
  static constexpr int kMaxTerms = 40;

  /// theta1(z) = 2 sum (-1)^n q^{(n+1/2)^2} sin((2n+1) pi z).
  static Complex theta1(const Complex& z) {
    using std::abs;
    using std::pow;
    Complex sum = 0;
    for (int n = 0; n < kMaxTerms; ++n) {
      const Scalar a = Scalar(n) + Scalar(0.5);
      const Complex term = Scalar(n % 2 ? -2 : 2) * pow(q(), a * a) *
                           std::sin(Scalar(2 * n + 1) * pi<Scalar>() * z);
      sum += term;
      if (abs(term) <= tol() * abs(sum)) break;
    }
    return sum;
  }

  /// theta1(z) / z, finite at z = 0 where it equals theta1'(0).
  static Complex theta1_over_z(const Complex& z) {
    using std::abs;
    using std::pow;
    Complex sum = 0;
    for (int n = 0; n < kMaxTerms; ++n) {
      const Scalar a = Scalar(n) + Scalar(0.5);
      const Scalar k = Scalar(2 * n + 1) * pi<Scalar>();
      const Complex term = Scalar(n % 2 ? -2 : 2) * pow(q(), a * a) * k * sinc(k * z);
      sum += term;
      if (abs(term) <= tol() * abs(sum)) break;
    }
    return sum;
  }

  /// theta1'(0) = 2 pi sum (-1)^n (2n+1) q^{(n+1/2)^2}.
  static Scalar theta1_prime0() {
    using std::pow;
    Scalar sum = 0;
    for (int n = 0; n < kMaxTerms; ++n) {
      const Scalar a = Scalar(n) + Scalar(0.5);
      sum += Scalar(n % 2 ? -1 : 1) * Scalar(2 * n + 1) * pow(q(), a * a);
    }
    return Scalar(2) * pi<Scalar>() * sum;
  }

  static Scalar theta2_0() {
    using std::pow;
    Scalar sum = 0;
    for (int n = 0; n < kMaxTerms; ++n) {
      const Scalar a = Scalar(n) + Scalar(0.5);
      sum += Scalar(2) * pow(q(), a * a);
    }
    return sum;
  }
  static Scalar theta3_0() {
    using std::pow;
    Scalar sum = 1;
    for (int n = 1; n < kMaxTerms; ++n) sum += Scalar(2) * pow(q(), Scalar(n * n));
    return sum;
  }
  static Scalar theta4_0() {
    using std::pow;
    Scalar sum = 1;
    for (int n = 1; n < kMaxTerms; ++n) sum += Scalar(n % 2 ? -2 : 2) * pow(q(), Scalar(n * n));
    return sum;
  }

 private:
  /// sin(w) / w with a Taylor branch near 0.
  static Complex sinc(const Complex& w) {
    using std::abs;
    if (abs(w) > Scalar(1e-3)) return std::sin(w) / w;
    const Complex w2 = w * w;
    return Scalar(1) - w2 / Scalar(6) * (Scalar(1) - w2 / Scalar(20) * (Scalar(1) - w2 / Scalar(42)));
  }
};

}  // namespace hym
