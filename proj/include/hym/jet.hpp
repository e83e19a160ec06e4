#pragma once

#include <cmath>

namespace hym {

/// Second-order jet (f, f', f'') of a function of one real variable.
template <typename T>
struct Jet {
  T v{}, d1{}, d2{};

  static Jet constant(const T& c) { return {c, T(0), T(0)}; }
  static Jet variable(const T& x) { return {x, T(1), T(0)}; }

  Jet operator-() const { return {-v, -d1, -d2}; }
  Jet& operator+=(const Jet& o) {
    v += o.v;
    d1 += o.d1;
    d2 += o.d2;
    return *this;
  }
  Jet& operator-=(const Jet& o) { return *this += -o; }
};

template <typename T>
Jet<T> operator+(Jet<T> a, const Jet<T>& b) {
  return a += b;
}
template <typename T>
Jet<T> operator-(Jet<T> a, const Jet<T>& b) {
  return a -= b;
}
template <typename T>
Jet<T> operator*(const Jet<T>& a, const Jet<T>& b) {
  return {a.v * b.v, a.d1 * b.v + a.v * b.d1, a.d2 * b.v + T(2) * a.d1 * b.d1 + a.v * b.d2};
}
template <typename T>
Jet<T> operator*(const T& c, const Jet<T>& a) {
  return {c * a.v, c * a.d1, c * a.d2};
}

/// f(g) given f(g.v), f'(g.v), f''(g.v).
template <typename T>
Jet<T> chain(const Jet<T>& g, const T& f0, const T& f1, const T& f2) {
  return {f0, f1 * g.d1, f2 * g.d1 * g.d1 + f1 * g.d2};
}

template <typename T>
Jet<T> exp(const Jet<T>& g) {
  using std::exp;
  const T e = exp(g.v);
  return chain(g, e, e, e);
}
template <typename T>
Jet<T> expm1(const Jet<T>& g) {
  using std::exp;
  using std::expm1;
  const T e = exp(g.v);
  return chain(g, expm1(g.v), e, e);
}
template <typename T>
Jet<T> log(const Jet<T>& g) {
  using std::log;
  return chain(g, log(g.v), T(1) / g.v, -T(1) / (g.v * g.v));
}
template <typename T>
Jet<T> log1p(const Jet<T>& g) {
  using std::log1p;
  const T p = T(1) + g.v;
  return chain(g, log1p(g.v), T(1) / p, -T(1) / (p * p));
}
template <typename T>
Jet<T> sinh(const Jet<T>& g) {
  using std::cosh;
  using std::sinh;
  const T s = sinh(g.v);
  return chain(g, s, cosh(g.v), s);
}

/// d^2f/dz dzbar = (f'' + f'/r)/4 for a radial f; the r = 0 limit is f''/2.
template <typename T>
T ddbar_radial(const Jet<T>& f, const T& r) {
  if (r == T(0)) return f.d2 / T(2);
  return (f.d2 + f.d1 / r) / T(4);
}

}  // namespace hym
